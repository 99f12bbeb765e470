#pragma once

#include <random>
#include <string>
#include <vector>

#include "prenexify/formula.hpp"
#include "prenexify/parser.hpp"

namespace prenexify::testing {

inline Formula F(const char* text) { return parse(text); }

/// Small random formulas; independent of the library's own generator.
class Gen {
 public:
  explicit Gen(std::uint64_t seed, std::vector<std::string> vars = {"x", "y", "z"})
      : rng_(seed), vars_(std::move(vars)) {}

  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Var var() { return vars_[below(vars_.size())]; }

  Formula atom() {
    switch (below(5)) {
      case 0: return Formula::falsum();
      case 1: return Formula::prime("P", {var()});
      case 2: return Formula::prime("Q", {var()});
      case 3: return Formula::prime("R", {var(), var()});
      default: return Formula::prime("S");
    }
  }

  Formula formula(std::size_t depth) {
    if (depth == 0 || below(4) == 0) return atom();
    switch (below(5)) {
      case 0: return Formula::conj(formula(depth - 1), formula(depth - 1));
      case 1: return Formula::disj(formula(depth - 1), formula(depth - 1));
      case 2: return Formula::imp(formula(depth - 1), formula(depth - 1));
      case 3: return Formula::exists(var(), formula(depth - 1));
      default: return Formula::forall(var(), formula(depth - 1));
    }
  }

  /// Renames one random binder to a variable that does not occur in `f`.
  Formula rename_some_binder(const Formula& f, const Var& to) {
    std::vector<Position> binders;
    for (const auto& p : positions(f)) {
      if (subformula_at(f, p).is_quantifier()) binders.push_back(p);
    }
    if (binders.empty()) return f;
    const Position& p = binders[below(binders.size())];
    const Formula& q = subformula_at(f, p);
    Formula renamed = Formula::quantified(q.quantifier(), to, rename_free(q.body(), q.bound_var(), to));
    return replace_at(f, p, renamed);
  }

 private:
  std::mt19937_64 rng_;
  std::vector<std::string> vars_;
};

/// Nameless rendering: bound occurrences become binder distances, free
/// variables keep their names. Two formulas are alpha-equivalent iff their
/// nameless forms are equal.
inline std::string de_bruijn(const Formula& f, std::vector<Var>& scope) {
  auto term = [&](const Var& v) {
    for (std::size_t i = scope.size(); i-- > 0;) {
      if (scope[i] == v) return "#" + std::to_string(scope.size() - 1 - i);
    }
    return "'" + v;
  };
  switch (f.kind()) {
    case Connective::Falsum: return "F";
    case Connective::Prime: {
      std::string s = f.predicate() + "(";
      for (const auto& a : f.args()) s += term(a) + ",";
      return s + ")";
    }
    case Connective::And:
    case Connective::Or:
    case Connective::Imp: {
      const char* op = f.kind() == Connective::And ? "&" : f.kind() == Connective::Or ? "|" : ">";
      return std::string("(") + op + de_bruijn(f.lhs(), scope) + " " + de_bruijn(f.rhs(), scope) + ")";
    }
    case Connective::Exists:
    case Connective::Forall: {
      scope.push_back(f.bound_var());
      std::string s = (f.kind() == Connective::Exists ? "(E " : "(A ") + de_bruijn(f.body(), scope) + ")";
      scope.pop_back();
      return s;
    }
  }
  return "?";
}

inline std::string de_bruijn(const Formula& f) {
  std::vector<Var> scope;
  return de_bruijn(f, scope);
}

}  // namespace prenexify::testing
