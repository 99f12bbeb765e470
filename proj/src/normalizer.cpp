#include "prenexify/normalizer.hpp"

#include <set>
#include <tuple>

#include "prenexify/parser.hpp"

namespace prenexify {

const char* target_name(Target t) { return t == Target::Sigma ? "sigma" : "pi"; }

nlohmann::json to_json(const NormalizationResult& r) {
  nlohmann::json j;
  j["schema"] = "prenexify.normalization/1";
  j["input"] = render(r.input);
  j["input_ast"] = to_json(r.input);
  j["n"] = r.n;
  j["k"] = r.k;
  j["target"] = target_name(r.target);
  j["output"] = render(r.output);
  j["output_ast"] = to_json(r.output);
  j["trace"] = trace_to_json(r.trace);
  return j;
}

namespace {

RuleId hoist_rule(Connective op, bool left, Quantifier q) {
  const bool ex = q == Quantifier::Exists;
  switch (op) {
    case Connective::Imp:
      if (left) return ex ? RuleId::ExistsImp : RuleId::ForallImpN;
      return ex ? RuleId::ImpExistsN : RuleId::ImpForall;
    case Connective::And:
      if (left) return ex ? RuleId::ExistsAnd : RuleId::ForallAnd;
      return ex ? RuleId::AndExists : RuleId::AndForall;
    default:
      if (left) return ex ? RuleId::ExistsOr : RuleId::ForallOrN;
      return ex ? RuleId::OrExists : RuleId::OrForallN;
  }
}

// A formula being rewritten in place, with the steps taken so far.
struct Workspace {
  Formula cur;
  std::vector<RewriteStep> steps;
  std::size_t n;

  bool try_hoist(const Position& at, bool left) {
    const Formula& redex = subformula_at(cur, at);
    const Formula& quant = left ? redex.lhs() : redex.rhs();
    const Formula& other = left ? redex.rhs() : redex.lhs();
    RewriteStep s{hoist_rule(redex.kind(), left, quant.quantifier()), at, std::nullopt};
    if (free_vars(other).contains(quant.bound_var())) s.fresh = fresh_variable(all_vars(cur));
    if (check_step(cur, s, n)) return false;
    cur = apply_step(cur, s, n);
    steps.push_back(std::move(s));
    return true;
  }
};

// Hoists both quantifier prefixes of the binary node at `root` out, in the
// first interleaving (left operand preferred) whose final prefix lies in
// kind_K+. Whether a continuation succeeds depends only on how many
// quantifiers were taken from each side and on the prefix built so far, so
// dead states are memoized on exactly that.
class Merger {
 public:
  Merger(Workspace& ws, Position root, PrenexKind kind, std::size_t level)
      : ws_(ws), root_(std::move(root)), kind_(kind), level_(level) {}

  bool run() { return search(0, 0, -1, -1, 0, root_); }

 private:
  bool search(std::size_t i, std::size_t j, int first, int last, std::size_t blocks,
              const Position& at) {
    const Formula redex = subformula_at(ws_.cur, at);
    if (redex.lhs().quantifier_free() && redex.rhs().quantifier_free()) {
      return in_plus(subformula_at(ws_.cur, root_), kind_, level_);
    }
    auto key = std::make_tuple(i, j, first, last, blocks);
    if (dead_.contains(key)) return false;

    const int want = kind_ == PrenexKind::Sigma ? static_cast<int>(Quantifier::Exists)
                                                : static_cast<int>(Quantifier::Forall);
    for (bool left : {true, false}) {
      const Formula& side = left ? redex.lhs() : redex.rhs();
      if (!side.is_quantifier()) continue;
      Quantifier q = side.quantifier();
      if (left && redex.kind() == Connective::Imp) q = dual(q);
      const int out = static_cast<int>(q);
      const std::size_t nb = out == last ? blocks : blocks + 1;
      const int nf = first < 0 ? out : first;
      if (nb > level_ || (nb == level_ && nf != want)) continue;

      Formula saved = ws_.cur;
      const std::size_t saved_steps = ws_.steps.size();
      if (!ws_.try_hoist(at, left)) continue;
      if (search(left ? i + 1 : i, left ? j : j + 1, nf, out, nb, at.body())) return true;
      ws_.cur = std::move(saved);
      ws_.steps.resize(saved_steps);
    }
    dead_.insert(key);
    return false;
  }

  Workspace& ws_;
  Position root_;
  PrenexKind kind_;
  std::size_t level_;
  std::set<std::tuple<std::size_t, std::size_t, int, int, std::size_t>> dead_;
};

bool merge_at(Workspace& ws, const Position& at, PrenexKind kind, std::size_t level) {
  return Merger(ws, at, kind, level).run();
}

void normalize_at(Workspace& ws, const Position& at, const Witness& w) {
  switch (w.clause) {
    case Clause::QuantifierFree:
      return;
    case Clause::Lower:
      normalize_at(ws, at, w.premises[0]);
      return;
    case Clause::Exists:
    case Clause::Forall:
      normalize_at(ws, at.body(), w.premises[0]);
      return;
    case Clause::And:
    case Clause::Or:
    case Clause::Imp: {
      normalize_at(ws, at.left(), w.premises[0]);
      normalize_at(ws, at.right(), w.premises[1]);
      const PrenexKind kind = w.kind == ClassKind::J ? PrenexKind::Sigma : PrenexKind::Pi;
      if (!merge_at(ws, at, kind, w.k)) {
        throw std::logic_error("normalize: no merge order for " +
                               render(subformula_at(ws.cur, at)) + " at " + at.to_string());
      }
      return;
    }
  }
}

MergeResult run_merge(Connective op, const Formula& a, const Formula& b, Target target,
                      std::size_t level, std::size_t n) {
  Workspace ws{Formula::binary(op, a, b), {}, n};
  Formula start = ws.cur;
  if (!merge_at(ws, Position{}, target, level)) {
    throw std::logic_error("merge: no hoisting order reaches the target class");
  }
  return {ws.cur, Trace{start, std::move(ws.steps), n}};
}

bool either_plus(const Formula& f, std::size_t k) {
  return in_sigma_plus(f, k) || in_pi_plus(f, k);
}

}  // namespace

NormalizationResult normalize(const Formula& f, Target target, std::size_t k, std::size_t n) {
  const ClassKind kind = target == Target::Sigma ? ClassKind::J : ClassKind::R;
  MembershipTable table(f, n, k);
  auto w = table.witness(kind, k);
  if (!w) throw NotInClass(table.explain_failure(kind, k));
  Workspace ws{f, {}, n};
  normalize_at(ws, Position{}, *w);
  return {f, n, k, target, ws.cur, Trace{f, std::move(ws.steps), n}};
}

NormalizationResult normalize_J(const Formula& f, std::size_t k, std::size_t n) {
  return normalize(f, Target::Sigma, k, n);
}

NormalizationResult normalize_R(const Formula& f, std::size_t k, std::size_t n) {
  return normalize(f, Target::Pi, k, n);
}

MergeResult merge_and(const Formula& psi1, const Formula& psi2, std::size_t k, Target target,
                      std::size_t n) {
  if (!in_plus(psi1, target, k) || !in_plus(psi2, target, k)) {
    throw PreconditionViolated(std::string("merge_and: both operands must be in ") +
                               (target == Target::Sigma ? "Sigma_" : "Pi_") +
                               std::to_string(k) + "+");
  }
  return run_merge(Connective::And, psi1, psi2, target, k, n);
}

MergeResult merge_or(const Formula& psi1, const Formula& psi2, std::size_t k, std::size_t i,
                     Target target, std::size_t n) {
  const std::size_t top = k + i + 1;
  bool ok = k <= n && ((either_plus(psi1, k) && in_plus(psi2, target, top)) ||
                       (in_plus(psi1, target, top) && either_plus(psi2, k)));
  if (!ok && i == 0 && k <= n && in_plus(psi1, target, k + 1) && in_plus(psi2, target, k + 1)) {
    ok = target == Target::Sigma || k + 1 <= n;
  }
  if (!ok) throw PreconditionViolated("merge_or: operands do not meet the precondition");
  return run_merge(Connective::Or, psi1, psi2, target, top, n);
}

MergeResult merge_imp(const Formula& psi1, const Formula& psi2, std::size_t k, std::size_t i,
                      Target target, std::size_t n) {
  const std::size_t top = k + i + 1;
  bool ok = k <= n;
  if (target == Target::Sigma) {
    ok = ok && either_plus(psi1, k) && in_sigma_plus(psi2, top);
  } else {
    ok = ok && in_sigma_plus(psi1, k + 1) && in_pi_plus(psi2, top);
  }
  if (!ok) throw PreconditionViolated("merge_imp: operands do not meet the precondition");
  return run_merge(Connective::Imp, psi1, psi2, target, top, n);
}

}  // namespace prenexify
