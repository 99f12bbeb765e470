#include "prenexify/semiclassical.hpp"

#include <stdexcept>

#include "prenexify/parser.hpp"

namespace prenexify {

const char* clause_name(Clause c) {
  switch (c) {
    case Clause::QuantifierFree: return "quantifier-free";
    case Clause::Lower: return "lower";
    case Clause::And: return "and";
    case Clause::Or: return "or";
    case Clause::Imp: return "imp";
    case Clause::Exists: return "exists";
    case Clause::Forall: return "forall";
  }
  return "?";
}

std::size_t Witness::size() const {
  std::size_t s = 1;
  for (const auto& p : premises) s += p.size();
  return s;
}

nlohmann::json to_json(const Witness& w) {
  nlohmann::json j;
  j["class"] = w.kind == ClassKind::J ? "J" : "R";
  j["k"] = w.k;
  j["clause"] = clause_name(w.clause);
  if (!w.premises.empty()) {
    j["premises"] = nlohmann::json::array();
    for (const auto& p : w.premises) j["premises"].push_back(to_json(p));
  }
  return j;
}

namespace {

enum class Need : std::uint8_t { J, R, D };

struct Req {
  Need need;
  std::size_t k;
};

using Alternatives = std::vector<std::vector<Req>>;

// Structural generation clauses for `kind` at level k >= 1 and degree n,
// keyed by the top connective. Each alternative lists one requirement per
// immediate subformula.
Alternatives structural(ClassKind kind, Connective c, std::size_t k, std::size_t n) {
  const std::size_t lo = k - 1;
  if (kind == ClassKind::J) {
    switch (c) {
      case Connective::And:
        return {{{Need::J, k}, {Need::J, k}}};
      case Connective::Or:
        if (lo <= n) return {{{Need::J, k}, {Need::J, k}}};
        return {{{Need::J, k}, {Need::J, n + 1}}, {{Need::J, n + 1}, {Need::J, k}}};
      case Connective::Imp:
        if (lo < n) return {{{Need::R, k}, {Need::J, k}}};
        if (lo == n) return {{{Need::D, lo}, {Need::J, k}}};
        return {{{Need::D, n}, {Need::J, k}}};
      case Connective::Exists:
        return {{{Need::J, k}}};
      default:
        return {};
    }
  }
  switch (c) {
    case Connective::And:
      return {{{Need::R, k}, {Need::R, k}}};
    case Connective::Or:
      if (lo < n) return {{{Need::R, k}, {Need::R, k}}};
      if (lo == n) return {{{Need::R, k}, {Need::D, lo}}, {{Need::D, lo}, {Need::R, k}}};
      return {{{Need::R, k}, {Need::D, n}}, {{Need::D, n}, {Need::R, k}}};
    case Connective::Imp:
      if (lo <= n) return {{{Need::J, k}, {Need::R, k}}};
      return {{{Need::J, n + 1}, {Need::R, k}}};
    case Connective::Forall:
      return {{{Need::R, k}}};
    default:
      return {};
  }
}

Clause clause_of(Connective c) {
  switch (c) {
    case Connective::And: return Clause::And;
    case Connective::Or: return Clause::Or;
    case Connective::Imp: return Clause::Imp;
    case Connective::Exists: return Clause::Exists;
    case Connective::Forall: return Clause::Forall;
    default: return Clause::QuantifierFree;
  }
}

std::string class_label(Need need, std::size_t k, std::size_t n) {
  const char* name = need == Need::J ? "J" : need == Need::R ? "R" : "D";
  return std::string(name) + "_" + std::to_string(k) + "^" + std::to_string(n);
}

std::string class_label(ClassKind kind, std::size_t k, std::size_t n) {
  return class_label(kind == ClassKind::J ? Need::J : Need::R, k, n);
}

const char* connective_word(Connective c) {
  switch (c) {
    case Connective::And: return "conjunction";
    case Connective::Or: return "disjunction";
    case Connective::Imp: return "implication";
    case Connective::Exists: return "existential";
    case Connective::Forall: return "universal";
    default: return "atomic";
  }
}

}  // namespace

MembershipTable::MembershipTable(const Formula& f, std::size_t n, std::size_t k_max)
    : f_(f), n_(n), k_max_(k_max) {
  nodes_.reserve(f.size());
  build(f_);
}

int MembershipTable::build(const Formula& f) {
  Node node{&f, -1, -1, {}, {}};
  if (f.is_binary()) {
    node.left = build(f.lhs());
    node.right = build(f.rhs());
  } else if (f.is_quantifier()) {
    node.left = build(f.body());
  }
  nodes_.push_back(std::move(node));
  fill(nodes_.back());
  return static_cast<int>(nodes_.size()) - 1;
}

void MembershipTable::fill(Node& node) {
  node.j.assign(k_max_ + 1, false);
  node.r.assign(k_max_ + 1, false);
  const bool qf = node.f->quantifier_free();
  node.j[0] = node.r[0] = qf;
  // `node` is nodes_.back(); clause_holds reads it through its index.
  const int self = static_cast<int>(&node - nodes_.data());
  for (std::size_t k = 1; k <= k_max_; ++k) {
    const bool lower = node.j[k - 1] || node.r[k - 1];
    node.j[k] = lower || clause_holds(self, ClassKind::J, k);
    node.r[k] = lower || clause_holds(self, ClassKind::R, k);
  }
}

bool MembershipTable::at(int node, ClassKind kind, std::size_t k) const {
  if (k > k_max_) return false;
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  return kind == ClassKind::J ? nd.j[k] : nd.r[k];
}

bool MembershipTable::clause_holds(int node, ClassKind kind, std::size_t k) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  const int kids[2] = {nd.left, nd.right};
  for (const auto& alt : structural(kind, nd.f->kind(), k, n_)) {
    bool ok = true;
    for (std::size_t i = 0; i < alt.size() && ok; ++i) {
      const Req& q = alt[i];
      ok = q.need == Need::D ? d(kids[i], q.k)
                             : at(kids[i], q.need == Need::J ? ClassKind::J : ClassKind::R, q.k);
    }
    if (ok) return true;
  }
  return false;
}

Witness MembershipTable::make_d_witness(int node, std::size_t k) const {
  return make_witness(node, at(node, ClassKind::J, k) ? ClassKind::J : ClassKind::R, k);
}

Witness MembershipTable::make_witness(int node, ClassKind kind, std::size_t k) const {
  const Node& nd = nodes_[static_cast<std::size_t>(node)];
  Witness w{kind, k, Clause::QuantifierFree, {}};
  if (k == 0) return w;
  if (d(node, k - 1)) {
    w.clause = Clause::Lower;
    w.premises.push_back(make_d_witness(node, k - 1));
    return w;
  }
  const int kids[2] = {nd.left, nd.right};
  for (const auto& alt : structural(kind, nd.f->kind(), k, n_)) {
    bool ok = true;
    for (std::size_t i = 0; i < alt.size() && ok; ++i) {
      const Req& q = alt[i];
      ok = q.need == Need::D ? d(kids[i], q.k)
                             : at(kids[i], q.need == Need::J ? ClassKind::J : ClassKind::R, q.k);
    }
    if (!ok) continue;
    w.clause = clause_of(nd.f->kind());
    for (std::size_t i = 0; i < alt.size(); ++i) {
      const Req& q = alt[i];
      w.premises.push_back(q.need == Need::D
                               ? make_d_witness(kids[i], q.k)
                               : make_witness(kids[i], q.need == Need::J ? ClassKind::J : ClassKind::R,
                                              q.k));
    }
    return w;
  }
  throw std::logic_error("make_witness: no clause applies");
}

std::optional<Witness> MembershipTable::witness(ClassKind kind, std::size_t k) const {
  if (!at(root(), kind, k)) return std::nullopt;
  return make_witness(root(), kind, k);
}

std::string MembershipTable::explain_failure(ClassKind kind, std::size_t k) const {
  const std::string text = render(f_);
  const std::string target = class_label(kind, k, n_);
  if (at(root(), kind, k)) return text + " is in " + target;
  if (k == 0) return text + " is not in " + target + ": it contains a quantifier";
  std::string out = text + " is not in " + target + ": it is not in " +
                    class_label(Need::D, k - 1, n_);
  const Node& nd = nodes_[static_cast<std::size_t>(root())];
  const Alternatives alts = structural(kind, nd.f->kind(), k, n_);
  if (alts.empty()) {
    out += ", and no ";
    out += connective_word(nd.f->kind());
    out += " clause generates " + target;
    return out;
  }
  const int kids[2] = {nd.left, nd.right};
  const char* names[2] = {nd.f->is_binary() ? "left side" : "body", "right side"};
  if (nd.f->kind() == Connective::Imp) {
    names[0] = "antecedent";
    names[1] = "consequent";
  }
  out += ", and the ";
  out += connective_word(nd.f->kind());
  out += " clause fails:";
  for (std::size_t a = 0; a < alts.size(); ++a) {
    out += a == 0 ? " needs " : "; or needs ";
    const auto& alt = alts[a];
    for (std::size_t i = 0; i < alt.size(); ++i) {
      const Req& q = alt[i];
      bool ok = q.need == Need::D
                    ? d(kids[i], q.k)
                    : at(kids[i], q.need == Need::J ? ClassKind::J : ClassKind::R, q.k);
      if (i > 0) out += " and ";
      out += std::string(names[i]) + " in " + class_label(q.need, q.k, n_) +
             (ok ? " (holds)" : " (fails)");
    }
  }
  return out;
}

bool in_J(const Formula& f, std::size_t k, std::size_t n) {
  return MembershipTable(f, n, k).J(k);
}
bool in_R(const Formula& f, std::size_t k, std::size_t n) {
  return MembershipTable(f, n, k).R(k);
}
bool in_D(const Formula& f, std::size_t k, std::size_t n) {
  return MembershipTable(f, n, k).D(k);
}
bool in_class(const Formula& f, ClassKind kind, std::size_t k, std::size_t n) {
  return kind == ClassKind::J ? in_J(f, k, n) : in_R(f, k, n);
}

ClassVerdict classify(const Formula& f, std::size_t k, std::size_t n) {
  MembershipTable table(f, n, k);
  ClassVerdict v{f, n, k, table.J(k), table.R(k), {}, {}};
  v.witness_J = table.witness(ClassKind::J, k);
  v.witness_R = table.witness(ClassKind::R, k);
  return v;
}

MinLevels min_levels(const Formula& f, std::size_t n, std::optional<std::size_t> k_max) {
  MinLevels out;
  out.k_max = k_max.value_or(n + f.size() + 1);
  MembershipTable table(f, n, out.k_max);
  for (std::size_t k = 0; k <= out.k_max; ++k) {
    if (!out.k_J && table.J(k)) out.k_J = k;
    if (!out.k_R && table.R(k)) out.k_R = k;
  }
  return out;
}

bool in_E_plus(const Formula& f, std::size_t k) { return in_J(f, k, k); }
bool in_U_plus(const Formula& f, std::size_t k) { return in_R(f, k, k); }

namespace {

// Direct transcription of the class definition, used only to re-check
// witnesses.
bool replay(const Formula& f, const Witness& w, std::size_t n) {
  const std::size_t k = w.k;
  const bool is_j = w.kind == ClassKind::J;
  auto is = [](const Witness& p, ClassKind kind, std::size_t level) {
    return p.kind == kind && p.k == level;
  };
  auto is_d = [](const Witness& p, std::size_t level) { return p.k == level; };
  const auto& ps = w.premises;

  switch (w.clause) {
    case Clause::QuantifierFree:
      return k == 0 && ps.empty() && f.quantifier_free();
    case Clause::Lower:
      return k >= 1 && ps.size() == 1 && is_d(ps[0], k - 1) && replay(f, ps[0], n);
    default:
      break;
  }
  if (k == 0) return false;
  const std::size_t c = k - 1;
  const ClassKind J = ClassKind::J, R = ClassKind::R;

  if (f.is_quantifier()) {
    if (ps.size() != 1) return false;
    if (is_j && w.clause == Clause::Exists && f.kind() == Connective::Exists) {
      return is(ps[0], J, k) && replay(f.body(), ps[0], n);
    }
    if (!is_j && w.clause == Clause::Forall && f.kind() == Connective::Forall) {
      return is(ps[0], R, k) && replay(f.body(), ps[0], n);
    }
    return false;
  }
  if (!f.is_binary() || ps.size() != 2) return false;
  const Witness& a = ps[0];
  const Witness& b = ps[1];
  bool shape = false;
  switch (f.kind()) {
    case Connective::And:
      if (w.clause != Clause::And) return false;
      shape = is_j ? is(a, J, k) && is(b, J, k) : is(a, R, k) && is(b, R, k);
      break;
    case Connective::Or:
      if (w.clause != Clause::Or) return false;
      if (is_j) {
        if (c <= n) {
          shape = is(a, J, k) && is(b, J, k);
        } else {
          shape = (is(a, J, k) && is(b, J, n + 1)) || (is(a, J, n + 1) && is(b, J, k));
        }
      } else if (c < n) {
        shape = is(a, R, k) && is(b, R, k);
      } else {
        const std::size_t side = c == n ? c : n;
        shape = (is(a, R, k) && is_d(b, side)) || (is_d(a, side) && is(b, R, k));
      }
      break;
    case Connective::Imp:
      if (w.clause != Clause::Imp) return false;
      if (is_j) {
        if (c < n) {
          shape = is(a, R, k) && is(b, J, k);
        } else {
          shape = is_d(a, c == n ? c : n) && is(b, J, k);
        }
      } else {
        shape = is(a, J, c <= n ? k : n + 1) && is(b, R, k);
      }
      break;
    default:
      return false;
  }
  return shape && replay(f.lhs(), a, n) && replay(f.rhs(), b, n);
}

}  // namespace

bool replay_witness(const Formula& f, const Witness& w, std::size_t n) { return replay(f, w, n); }

std::string explain_non_membership(const Formula& f, ClassKind kind, std::size_t k,
                                   std::size_t n) {
  return MembershipTable(f, n, k).explain_failure(kind, k);
}

}  // namespace prenexify
