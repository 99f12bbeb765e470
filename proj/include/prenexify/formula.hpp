#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace prenexify {

using Var = std::string;

// Sorted, so iteration order is reproducible.
using VarSet = std::set<Var>;

enum class Connective : std::uint8_t { Prime, Falsum, And, Or, Imp, Exists, Forall };

enum class Quantifier : std::uint8_t { Exists, Forall };

constexpr Quantifier dual(Quantifier q) {
  return q == Quantifier::Exists ? Quantifier::Forall : Quantifier::Exists;
}

/// Immutable first-order formula over variable-only terms.
///
/// Nodes are shared between copies; a Formula is cheap to copy and safe to
/// share across threads. Negation is `imp(phi, falsum())`, quantifiers bind a
/// single variable each.
class Formula {
 public:
  /// The default formula is falsum.
  Formula();

  static Formula prime(std::string predicate, std::vector<Var> args = {});
  static Formula falsum();
  static Formula conj(Formula lhs, Formula rhs);
  static Formula disj(Formula lhs, Formula rhs);
  static Formula imp(Formula lhs, Formula rhs);
  static Formula neg(Formula f) { return imp(std::move(f), falsum()); }
  static Formula exists(Var x, Formula body);
  static Formula forall(Var x, Formula body);

  /// `c` must be And, Or or Imp.
  static Formula binary(Connective c, Formula lhs, Formula rhs);
  static Formula quantified(Quantifier q, Var x, Formula body);

  Connective kind() const;
  bool is_atomic() const;
  bool is_binary() const;
  bool is_quantifier() const;
  /// Precondition: is_quantifier().
  Quantifier quantifier() const;

  const std::string& predicate() const;
  const std::vector<Var>& args() const;
  const Var& bound_var() const;
  const Formula& lhs() const;
  const Formula& rhs() const;
  const Formula& body() const;

  /// Number of AST nodes.
  std::size_t size() const;
  bool quantifier_free() const;
  std::size_t hash() const;

  /// Identity of the shared node; stable for the lifetime of any copy.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

enum class Dir : std::uint8_t { Left, Right, Body };

/// Path from the root to a node: a sequence of child selectors.
class Position {
 public:
  Position() = default;
  explicit Position(std::vector<Dir> path) : path_(std::move(path)) {}

  const std::vector<Dir>& path() const { return path_; }
  bool is_root() const { return path_.empty(); }
  std::size_t depth() const { return path_.size(); }

  Position child(Dir d) const;
  Position left() const { return child(Dir::Left); }
  Position right() const { return child(Dir::Right); }
  Position body() const { return child(Dir::Body); }
  Position concat(const Position& suffix) const;

  /// "/" for the root, otherwise "/l/r/b".
  std::string to_string() const;
  /// Throws std::invalid_argument on malformed text.
  static Position parse(const std::string& text);

  friend bool operator==(const Position&, const Position&) = default;
  friend auto operator<=>(const Position&, const Position&) = default;

 private:
  std::vector<Dir> path_;
};

/// Leftmost-innermost order: descendants before ancestors, left before right.
bool postorder_less(const Position& a, const Position& b);

class InvalidPosition : public std::out_of_range {
 public:
  explicit InvalidPosition(const Position& p);
};

VarSet free_vars(const Formula& f);
/// Every variable name occurring in `f`, free, bound or as a binder.
VarSet all_vars(const Formula& f);
bool is_quantifier_free(const Formula& f);

bool is_valid_position(const Formula& f, const Position& p);
const Formula& subformula_at(const Formula& f, const Position& p);
/// Literal occurrence replacement; no capture avoidance.
Formula replace_at(const Formula& f, const Position& p, Formula replacement);
/// All valid positions in preorder.
std::vector<Position> positions(const Formula& f);

/// Replaces free occurrences of `from` by `to`. The caller guarantees that
/// `to` is not captured (typically: `to` does not occur in `f` at all).
Formula rename_free(const Formula& f, const Var& from, const Var& to);

/// Smallest name in v0, v1, ... not in `avoid`.
Var fresh_variable(const VarSet& avoid);

/// Renames every binder, in preorder, to the next name of v0, v1, ... that is
/// not free in `f`. Alpha-equivalent formulas map to identical results.
Formula alpha_canonical(const Formula& f);
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Sum over quantifier occurrences of the number of binary connectives
/// strictly above them.
std::size_t connective_depth_measure(const Formula& f);

}  // namespace prenexify

template <>
struct std::hash<prenexify::Formula> {
  std::size_t operator()(const prenexify::Formula& f) const noexcept { return f.hash(); }
};
