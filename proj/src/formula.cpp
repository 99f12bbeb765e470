#include "prenexify/formula.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <utility>

namespace prenexify {

struct Formula::Node {
  Connective kind;
  std::string name;  // predicate symbol or bound variable
  std::vector<Var> args;
  Formula lhs;  // also the quantifier body
  Formula rhs;
  std::size_t size = 1;
  bool qf = true;
  std::size_t hash = 0;

  // Only used to build the shared falsum node without recursing into the
  // default constructor of the child members.
  struct FalsumTag {};
  explicit Node(FalsumTag) : kind(Connective::Falsum), lhs(nullptr), rhs(nullptr) {
    hash = 0x9e3779b97f4a7c15ULL;
  }
  Node(Connective k, std::string n, std::vector<Var> a, Formula l, Formula r)
      : kind(k), name(std::move(n)), args(std::move(a)), lhs(std::move(l)), rhs(std::move(r)) {}
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

}  // namespace

// The falsum node's own children are null and never read.
Formula::Formula() {
  static const std::shared_ptr<const Node> falsum = std::make_shared<const Node>(Node::FalsumTag{});
  node_ = falsum;
}

Formula Formula::prime(std::string predicate, std::vector<Var> args) {
  std::size_t h = mix(std::hash<std::string>{}(predicate), 1);
  for (const auto& a : args) h = mix(h, std::hash<std::string>{}(a));
  auto node = std::make_shared<Node>(Connective::Prime, std::move(predicate), std::move(args),
                                     Formula(), Formula());
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::falsum() { return Formula(); }

Formula Formula::binary(Connective c, Formula lhs, Formula rhs) {
  if (c != Connective::And && c != Connective::Or && c != Connective::Imp) {
    throw std::invalid_argument("Formula::binary: not a binary connective");
  }
  std::size_t h = mix(mix(static_cast<std::size_t>(c) + 17, lhs.hash()), rhs.hash());
  std::size_t size = 1 + lhs.size() + rhs.size();
  bool qf = lhs.quantifier_free() && rhs.quantifier_free();
  auto node = std::make_shared<Node>(c, std::string{}, std::vector<Var>{}, std::move(lhs),
                                     std::move(rhs));
  node->size = size;
  node->qf = qf;
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::conj(Formula lhs, Formula rhs) {
  return binary(Connective::And, std::move(lhs), std::move(rhs));
}
Formula Formula::disj(Formula lhs, Formula rhs) {
  return binary(Connective::Or, std::move(lhs), std::move(rhs));
}
Formula Formula::imp(Formula lhs, Formula rhs) {
  return binary(Connective::Imp, std::move(lhs), std::move(rhs));
}

Formula Formula::quantified(Quantifier q, Var x, Formula body) {
  Connective c = q == Quantifier::Exists ? Connective::Exists : Connective::Forall;
  std::size_t h = mix(mix(static_cast<std::size_t>(c) + 31, std::hash<std::string>{}(x)),
                      body.hash());
  std::size_t size = 1 + body.size();
  auto node = std::make_shared<Node>(c, std::move(x), std::vector<Var>{}, std::move(body),
                                     Formula());
  node->size = size;
  node->qf = false;
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::exists(Var x, Formula body) {
  return quantified(Quantifier::Exists, std::move(x), std::move(body));
}
Formula Formula::forall(Var x, Formula body) {
  return quantified(Quantifier::Forall, std::move(x), std::move(body));
}

Connective Formula::kind() const { return node_->kind; }
bool Formula::is_atomic() const {
  return kind() == Connective::Prime || kind() == Connective::Falsum;
}
bool Formula::is_binary() const {
  return kind() == Connective::And || kind() == Connective::Or || kind() == Connective::Imp;
}
bool Formula::is_quantifier() const {
  return kind() == Connective::Exists || kind() == Connective::Forall;
}
Quantifier Formula::quantifier() const {
  assert(is_quantifier());
  return kind() == Connective::Exists ? Quantifier::Exists : Quantifier::Forall;
}
const std::string& Formula::predicate() const { return node_->name; }
const std::vector<Var>& Formula::args() const { return node_->args; }
const Var& Formula::bound_var() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }
const Formula& Formula::body() const { return node_->lhs; }
std::size_t Formula::size() const { return node_->size; }
bool Formula::quantifier_free() const { return node_->qf; }
std::size_t Formula::hash() const { return node_->hash; }

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Connective::Falsum:
      return true;
    case Connective::Prime:
      return a.predicate() == b.predicate() && a.args() == b.args();
    case Connective::And:
    case Connective::Or:
    case Connective::Imp:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
    case Connective::Exists:
    case Connective::Forall:
      return a.bound_var() == b.bound_var() && a.body() == b.body();
  }
  return false;
}

// ---------------------------------------------------------------------------
// Positions

Position Position::child(Dir d) const {
  Position p = *this;
  p.path_.push_back(d);
  return p;
}

Position Position::concat(const Position& suffix) const {
  Position p = *this;
  p.path_.insert(p.path_.end(), suffix.path_.begin(), suffix.path_.end());
  return p;
}

std::string Position::to_string() const {
  if (path_.empty()) return "/";
  std::string out;
  for (Dir d : path_) {
    out += '/';
    out += d == Dir::Left ? 'l' : d == Dir::Right ? 'r' : 'b';
  }
  return out;
}

Position Position::parse(const std::string& text) {
  if (text == "/") return {};
  if (text.empty() || text.size() % 2 != 0) {
    throw std::invalid_argument("malformed position '" + text + "'");
  }
  std::vector<Dir> path;
  for (std::size_t i = 0; i < text.size(); i += 2) {
    if (text[i] != '/') throw std::invalid_argument("malformed position '" + text + "'");
    switch (text[i + 1]) {
      case 'l': path.push_back(Dir::Left); break;
      case 'r': path.push_back(Dir::Right); break;
      case 'b': path.push_back(Dir::Body); break;
      default: throw std::invalid_argument("malformed position '" + text + "'");
    }
  }
  return Position(std::move(path));
}

bool postorder_less(const Position& a, const Position& b) {
  const auto& pa = a.path();
  const auto& pb = b.path();
  std::size_t i = 0;
  while (i < pa.size() && i < pb.size() && pa[i] == pb[i]) ++i;
  if (i == pa.size() && i == pb.size()) return false;
  if (i == pb.size()) return true;   // a is strictly below b
  if (i == pa.size()) return false;  // b is strictly below a
  return pa[i] < pb[i];
}

InvalidPosition::InvalidPosition(const Position& p)
    : std::out_of_range("invalid position " + p.to_string()) {}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Formula& f, std::vector<Var>& bound, VarSet& out) {
  switch (f.kind()) {
    case Connective::Falsum:
      return;
    case Connective::Prime:
      for (const auto& a : f.args()) {
        if (std::find(bound.begin(), bound.end(), a) == bound.end()) out.insert(a);
      }
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Imp:
      collect_free(f.lhs(), bound, out);
      collect_free(f.rhs(), bound, out);
      return;
    case Connective::Exists:
    case Connective::Forall:
      bound.push_back(f.bound_var());
      collect_free(f.body(), bound, out);
      bound.pop_back();
      return;
  }
}

void collect_all(const Formula& f, VarSet& out) {
  switch (f.kind()) {
    case Connective::Falsum:
      return;
    case Connective::Prime:
      out.insert(f.args().begin(), f.args().end());
      return;
    case Connective::And:
    case Connective::Or:
    case Connective::Imp:
      collect_all(f.lhs(), out);
      collect_all(f.rhs(), out);
      return;
    case Connective::Exists:
    case Connective::Forall:
      out.insert(f.bound_var());
      collect_all(f.body(), out);
      return;
  }
}

}  // namespace

VarSet free_vars(const Formula& f) {
  VarSet out;
  std::vector<Var> bound;
  collect_free(f, bound, out);
  return out;
}

VarSet all_vars(const Formula& f) {
  VarSet out;
  collect_all(f, out);
  return out;
}

bool is_quantifier_free(const Formula& f) { return f.quantifier_free(); }

// ---------------------------------------------------------------------------
// Occurrences

namespace {

const Formula* child_of(const Formula& f, Dir d) {
  if (f.is_binary()) {
    if (d == Dir::Left) return &f.lhs();
    if (d == Dir::Right) return &f.rhs();
    return nullptr;
  }
  if (f.is_quantifier() && d == Dir::Body) return &f.body();
  return nullptr;
}

Formula replace_rec(const Formula& f, const std::vector<Dir>& path, std::size_t i,
                    Formula replacement) {
  if (i == path.size()) return replacement;
  Dir d = path[i];
  if (f.is_binary()) {
    if (d == Dir::Left) {
      return Formula::binary(f.kind(), replace_rec(f.lhs(), path, i + 1, std::move(replacement)),
                             f.rhs());
    }
    return Formula::binary(f.kind(), f.lhs(),
                           replace_rec(f.rhs(), path, i + 1, std::move(replacement)));
  }
  return Formula::quantified(f.quantifier(), f.bound_var(),
                             replace_rec(f.body(), path, i + 1, std::move(replacement)));
}

void collect_positions(const Formula& f, Position& cur, std::vector<Position>& out) {
  out.push_back(cur);
  if (f.is_binary()) {
    cur = cur.left();
    collect_positions(f.lhs(), cur, out);
    cur = Position(std::vector<Dir>(cur.path().begin(), cur.path().end() - 1)).right();
    collect_positions(f.rhs(), cur, out);
    cur = Position(std::vector<Dir>(cur.path().begin(), cur.path().end() - 1));
  } else if (f.is_quantifier()) {
    cur = cur.body();
    collect_positions(f.body(), cur, out);
    cur = Position(std::vector<Dir>(cur.path().begin(), cur.path().end() - 1));
  }
}

}  // namespace

bool is_valid_position(const Formula& f, const Position& p) {
  const Formula* cur = &f;
  for (Dir d : p.path()) {
    cur = child_of(*cur, d);
    if (cur == nullptr) return false;
  }
  return true;
}

const Formula& subformula_at(const Formula& f, const Position& p) {
  const Formula* cur = &f;
  for (Dir d : p.path()) {
    cur = child_of(*cur, d);
    if (cur == nullptr) throw InvalidPosition(p);
  }
  return *cur;
}

Formula replace_at(const Formula& f, const Position& p, Formula replacement) {
  if (!is_valid_position(f, p)) throw InvalidPosition(p);
  return replace_rec(f, p.path(), 0, std::move(replacement));
}

std::vector<Position> positions(const Formula& f) {
  std::vector<Position> out;
  Position cur;
  collect_positions(f, cur, out);
  return out;
}

Formula rename_free(const Formula& f, const Var& from, const Var& to) {
  switch (f.kind()) {
    case Connective::Falsum:
      return f;
    case Connective::Prime: {
      if (std::find(f.args().begin(), f.args().end(), from) == f.args().end()) return f;
      std::vector<Var> args = f.args();
      for (auto& a : args) {
        if (a == from) a = to;
      }
      return Formula::prime(f.predicate(), std::move(args));
    }
    case Connective::And:
    case Connective::Or:
    case Connective::Imp:
      return Formula::binary(f.kind(), rename_free(f.lhs(), from, to),
                             rename_free(f.rhs(), from, to));
    case Connective::Exists:
    case Connective::Forall:
      if (f.bound_var() == from) return f;
      return Formula::quantified(f.quantifier(), f.bound_var(), rename_free(f.body(), from, to));
  }
  return f;
}

Var fresh_variable(const VarSet& avoid) {
  for (std::size_t i = 0;; ++i) {
    Var v = "v" + std::to_string(i);
    if (!avoid.contains(v)) return v;
  }
}

// ---------------------------------------------------------------------------
// Alpha-canonical form

namespace {

class Canonicalizer {
 public:
  explicit Canonicalizer(VarSet free) : free_(std::move(free)) {}

  Formula run(const Formula& f) {
    switch (f.kind()) {
      case Connective::Falsum:
        return f;
      case Connective::Prime: {
        std::vector<Var> args = f.args();
        bool changed = false;
        for (auto& a : args) {
          // Innermost binder wins: scan the scope stack from the top.
          for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
            if (it->first == a) {
              if (a != it->second) {
                a = it->second;
                changed = true;
              }
              break;
            }
          }
        }
        return changed ? Formula::prime(f.predicate(), std::move(args)) : f;
      }
      case Connective::And:
      case Connective::Or:
      case Connective::Imp: {
        Formula l = run(f.lhs());
        Formula r = run(f.rhs());
        return Formula::binary(f.kind(), std::move(l), std::move(r));
      }
      case Connective::Exists:
      case Connective::Forall: {
        Var name = next_name();
        scope_.emplace_back(f.bound_var(), name);
        Formula body = run(f.body());
        scope_.pop_back();
        return Formula::quantified(f.quantifier(), std::move(name), std::move(body));
      }
    }
    return f;
  }

 private:
  Var next_name() {
    for (;;) {
      Var v = "v" + std::to_string(counter_++);
      if (!free_.contains(v)) return v;
    }
  }

  VarSet free_;
  std::vector<std::pair<Var, Var>> scope_;
  std::size_t counter_ = 0;
};

std::size_t measure_rec(const Formula& f, std::size_t above) {
  if (f.is_binary()) {
    return measure_rec(f.lhs(), above + 1) + measure_rec(f.rhs(), above + 1);
  }
  if (f.is_quantifier()) return above + measure_rec(f.body(), above);
  return 0;
}

}  // namespace

Formula alpha_canonical(const Formula& f) {
  if (f.quantifier_free()) return f;
  return Canonicalizer(free_vars(f)).run(f);
}

bool alpha_equivalent(const Formula& a, const Formula& b) {
  return alpha_canonical(a) == alpha_canonical(b);
}

std::size_t connective_depth_measure(const Formula& f) { return measure_rec(f, 0); }

}  // namespace prenexify
