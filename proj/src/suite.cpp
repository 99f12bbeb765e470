#include "prenexify/suite.hpp"

#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <unordered_map>

#include "prenexify/hierarchy.hpp"
#include "prenexify/normalizer.hpp"
#include "prenexify/parser.hpp"
#include "prenexify/rewrite.hpp"
#include "prenexify/semiclassical.hpp"

namespace prenexify {

namespace {

using Clock = std::chrono::steady_clock;

class Tally {
 public:
  explicit Tally(std::string name) : start_(Clock::now()) { r_.name = std::move(name); }

  template <typename Describe>
  void check(bool ok, Describe&& describe) {
    ++r_.checks;
    if (ok) return;
    ++r_.failures;
    r_.passed = false;
    if (r_.first_failure.empty()) r_.first_failure = describe();
  }

  void fail(const std::string& what) {
    check(false, [&] { return what; });
  }

  CriterionResult finish() {
    r_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    return r_;
  }

 private:
  CriterionResult r_;
  Clock::time_point start_;
};

// Bit k of j / r is membership in J_k^n / R_k^n.
struct Masks {
  std::uint32_t j = 0;
  std::uint32_t r = 0;

  bool J(std::size_t k) const { return (j >> k) & 1U; }
  bool R(std::size_t k) const { return (r >> k) & 1U; }
  bool D(std::size_t k) const { return J(k) || R(k); }
};

Masks masks(const Formula& f, std::size_t n, std::size_t k_max) {
  MembershipTable t(f, n, k_max);
  Masks m;
  for (std::size_t k = 0; k <= k_max; ++k) {
    if (t.J(k)) m.j |= 1U << k;
    if (t.R(k)) m.r |= 1U << k;
  }
  return m;
}

class MaskCache {
 public:
  MaskCache(std::size_t n, std::size_t k_max) : n_(n), k_max_(k_max) {}
  const Masks& get(const Formula& f) {
    auto it = cache_.find(f);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(f, masks(f, n_, k_max_)).first->second;
  }

 private:
  std::size_t n_, k_max_;
  std::unordered_map<Formula, Masks> cache_;
};

std::string at(const Formula& f, std::size_t k, std::size_t n) {
  return render(f) + " (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")";
}

}  // namespace

Signature corpus_signature(std::size_t max_size) {
  return Signature{{{"P", 1}, {"Q", 1}}, {"x", "y"}, max_size};
}

std::vector<Formula> corpus(const SuiteConfig& cfg) {
  return enumerate_formulas(corpus_signature(cfg.max_size));
}

SweepResult run_sweep(const std::vector<Formula>& formulas, const SuiteConfig& cfg) {
  Tally chars("characterization: J/R membership iff a Sigma+/Pi+ form is reachable");
  Tally norm("normalizer soundness");
  Tally back("backward closure along rewrite edges");
  const std::size_t K = cfg.k_max;

  for (const Formula& phi : formulas) {
    for (std::size_t n = 0; n <= cfg.n_max; ++n) {
      const ReachableSet rs = reachable_set(phi, n, cfg.budget);
      chars.check(rs.exhausted, [&] { return "search not exhausted: " + at(phi, 0, n); });

      const Masks direct = masks(phi, n, K);
      std::vector<Masks> mm;
      std::vector<std::optional<PrenexShape>> shapes;
      mm.reserve(rs.members.size());
      for (const auto& m : rs.members) {
        mm.push_back(masks(m, n, K));
        shapes.push_back(classify_prenex(m));
      }

      std::map<std::size_t, bool> trace_ok;
      auto witness_trace_ok = [&](std::size_t member) {
        auto it = trace_ok.find(member);
        if (it != trace_ok.end()) return it->second;
        bool ok = false;
        try {
          Trace t = rs.trace_to(member);
          ok = alpha_equivalent(verify_trace(t), rs.members[member]);
        } catch (const std::exception&) {
          ok = false;
        }
        return trace_ok[member] = ok;
      };

      for (std::size_t k = 0; k <= K; ++k) {
        for (Target target : {Target::Sigma, Target::Pi}) {
          std::optional<std::size_t> hit;
          for (std::size_t i = 0; i < rs.members.size() && !hit; ++i) {
            if (in_plus(rs.members[i], target, k)) hit = i;
          }
          const bool classified = target == Target::Sigma ? direct.J(k) : direct.R(k);
          chars.check(classified == hit.has_value(), [&] {
            return std::string(target == Target::Sigma ? "J" : "R") + " classifier says " +
                   (classified ? "yes" : "no") + ", search says " + (hit ? "yes" : "no") + ": " +
                   at(phi, k, n);
          });
          if (hit) {
            chars.check(witness_trace_ok(*hit),
                        [&] { return "search witness trace does not verify: " + at(phi, k, n); });
          }
          if (!classified) continue;

          bool ok = false;
          std::string why;
          try {
            NormalizationResult res = normalize(phi, target, k, n);
            Formula out = verify_trace(res.trace);
            ok = out == res.output && res.trace.degree == n && in_plus(out, target, k) &&
                 free_vars(out) == free_vars(phi) && res.trace.start == phi;
            if (!ok) why = "bad output " + render(res.output);
          } catch (const std::exception& e) {
            why = e.what();
          }
          norm.check(ok, [&] {
            return std::string(target_name(target)) + " " + at(phi, k, n) + ": " + why;
          });
        }
      }

      for (std::size_t i = 0; i < rs.edges.size(); ++i) {
        for (const auto& e : rs.edges[i]) {
          const Masks& src = mm[i];
          const Masks& dst = mm[e.target];
          for (std::size_t k = 0; k <= K; ++k) {
            bool ok = (!dst.J(k) || src.J(k)) && (!dst.R(k) || src.R(k));
            back.check(ok, [&] {
              return render(rs.members[i]) + " ~> " + render(rs.members[e.target]) + " via " +
                     to_string(e.step) + " loses membership at k=" + std::to_string(k) +
                     ", n=" + std::to_string(n);
            });
          }
        }
      }
    }
  }
  return {chars.finish(), norm.finish(), back.finish()};
}

CriterionResult check_stabilization(const std::vector<Formula>& formulas, const SuiteConfig& cfg) {
  Tally t("stabilization: J_k^n and R_k^n agree for n in {k, k+1, k+2}");
  const std::size_t top = std::min<std::size_t>(3, cfg.k_max);
  for (const Formula& phi : formulas) {
    std::vector<Masks> by_n;
    for (std::size_t n = 0; n <= top + 2; ++n) by_n.push_back(masks(phi, n, top));
    for (std::size_t k = 0; k <= top; ++k) {
      for (std::size_t n = k + 1; n <= k + 2; ++n) {
        t.check(by_n[n].J(k) == by_n[k].J(k) && by_n[n].R(k) == by_n[k].R(k),
                [&] { return "membership changes between n=" + std::to_string(k) + " and " + at(phi, k, n); });
      }
    }
  }
  return t.finish();
}

CriterionResult check_class_laws(const std::vector<Formula>& formulas, const SuiteConfig& cfg) {
  Tally t("class laws: cumulativity, monotone in n, Sigma+/Pi+ inclusion, D closure, inversion");
  const std::size_t K = cfg.k_max + 1;
  for (std::size_t n = 0; n <= cfg.n_max; ++n) {
    MaskCache here(n, K);
    MaskCache above(n + 1, K);
    for (const Formula& phi : formulas) {
      const Masks m = here.get(phi);

      for (std::size_t k = 0; k < K; ++k) {
        t.check(!m.D(k) || (m.J(k + 1) && m.R(k + 1)),
                [&] { return "cumulativity: " + at(phi, k, n); });
      }

      const Masks& up = above.get(phi);
      for (std::size_t k = 0; k <= K; ++k) {
        t.check((!m.J(k) || up.J(k)) && (!m.R(k) || up.R(k)),
                [&] { return "monotone in n: " + at(phi, k, n); });
      }

      if (n == 0) {
        for (std::size_t k = 0; k <= K; ++k) {
          t.check(!in_sigma_plus(phi, k) || m.J(k), [&] { return "Sigma+ in J^0: " + at(phi, k, 0); });
          t.check(!in_pi_plus(phi, k) || m.R(k), [&] { return "Pi+ in R^0: " + at(phi, k, 0); });
        }
      }

      for (const Position& p : positions(phi)) {
        if (p.is_root()) continue;
        const Formula& sub = subformula_at(phi, p);
        const Masks& s = here.get(sub);
        for (std::size_t k = 0; k <= K; ++k) {
          t.check(!m.D(k) || s.D(k), [&] {
            return "D closure: " + render(sub) + " at " + p.to_string() + " of " + at(phi, k, n);
          });
        }
      }

      // Inversion, for the level k + 1.
      for (std::size_t k = 0; k + 1 <= K; ++k) {
        const std::size_t k1 = k + 1;
        auto lemma = [&](const char* which, bool ok) {
          t.check(ok, [&] { return std::string("inversion ") + which + ": " + at(phi, k1, n); });
        };
        if (phi.is_binary()) {
          const Masks& a = here.get(phi.lhs());
          const Masks& b = here.get(phi.rhs());
          switch (phi.kind()) {
            case Connective::And:
              if (m.J(k1)) lemma("and/J", a.J(k1) && b.J(k1));
              if (m.R(k1)) lemma("and/R", a.R(k1) && b.R(k1));
              break;
            case Connective::Or:
              if (m.J(k1)) {
                lemma("or/J", k <= n ? a.J(k1) && b.J(k1)
                                     : (a.J(k1) && b.J(n + 1)) || (a.J(n + 1) && b.J(k1)));
              }
              if (m.R(k1)) {
                bool ok = k < n    ? a.R(k1) && b.R(k1)
                          : k == n ? (a.R(k1) && b.D(k)) || (a.D(k) && b.R(k1))
                                   : (a.R(k1) && b.J(n + 1)) || (a.J(n + 1) && b.R(k1));
                lemma("or/R", ok);
              }
              break;
            case Connective::Imp:
              if (m.J(k1)) {
                bool ok = k < n    ? a.R(k1) && b.J(k1)
                          : k == n ? a.D(k) && b.J(k1)
                                   : a.J(n + 1) && b.J(k1);
                lemma("imp/J", ok);
              }
              if (m.R(k1)) lemma("imp/R", a.J(k <= n ? k1 : n + 1) && b.R(k1));
              break;
            default:
              break;
          }
        } else if (phi.is_quantifier()) {
          const Masks& b = here.get(phi.body());
          if (phi.kind() == Connective::Exists) {
            if (m.J(k1)) lemma("exists/J", b.J(k1));
            if (m.R(k1)) lemma("exists/R", k > 0 && m.J(k));
          } else {
            if (m.J(k1)) lemma("forall/J", k > 0 && m.R(k));
            if (m.R(k1)) lemma("forall/R", b.R(k1));
          }
        }
      }
    }
  }
  return t.finish();
}

CriterionResult check_pinned_negatives(const SuiteConfig& cfg) {
  Tally t("pinned negatives: (forall x. P(x)) -> false and the disjunctive antecedent example");

  const Formula neg = parse("(forall x. P(x)) -> false");
  for (std::size_t k = 0; k <= 6; ++k) {
    t.check(!in_J(neg, k, 0) && !in_R(neg, k, 0),
            [&] { return "unexpected membership: " + at(neg, k, 0); });
  }
  t.check(in_J(neg, 2, 1), [&] { return "expected membership in J: " + at(neg, 2, 1); });
  const ReachableSet neg_rs = reachable_set(neg, 0, cfg.budget);
  t.check(neg_rs.exhausted && neg_rs.members.size() == 1,
          [&] { return "expected no rewrite of " + render(neg) + " at n=0"; });

  for (const char* text : {"(forall x. P(x)) | (exists y. Q(y)) -> R(x)",
                           "(forall x. P(x)) | (exists y. Q(y)) -> R(z)"}) {
    const Formula f = parse(text);
    const ReachResult r = can_reach(f, 1, [](const Formula& g) { return in_sigma_plus(g, 2); },
                                    cfg.budget);
    t.check(r.answer == Reach::No, [&] {
      return std::string("search from ") + text + " at n=1 answered " + reach_name(r.answer);
    });
    t.check(!in_J(f, 2, 1), [&] { return "unexpected membership: " + at(f, 2, 1); });
  }
  return t.finish();
}

CriterionResult check_rewrite_conformance(const SuiteConfig& cfg) {
  Tally t("rewrite conformance on seeded random steps");
  std::mt19937_64 rng(cfg.seed);
  const Signature sig{{{"P", 1}, {"Q", 1}, {"R", 2}}, {"x", "y", "z"}, 0};
  auto pick = [&](std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
  };

  std::size_t applied = 0;
  while (applied < cfg.random_steps) {
    const std::size_t n = pick(3);
    Trace trace{random_formula(rng, sig, 3 + pick(10)), {}, n};
    Formula cur = trace.start;
    for (std::size_t len = 0; len < 8 && applied < cfg.random_steps; ++len) {
      std::vector<RewriteStep> steps = applicable_steps(cur, n);

      // Degree monotonicity on every visited formula.
      std::vector<RewriteStep> wider = applicable_steps(cur, n + 1);
      for (const auto& s : steps) {
        bool found = false;
        for (const auto& w : wider) found = found || (w.rule == s.rule && w.position == s.position);
        t.check(found, [&] { return to_string(s) + " not applicable at degree " + std::to_string(n + 1) + " in " + render(cur); });
      }

      // Occasionally an explicit renaming step instead of a hoist.
      std::optional<RewriteStep> step;
      if (pick(5) == 0) {
        std::vector<Position> binders;
        for (const Position& p : positions(cur)) {
          const Formula& s = subformula_at(cur, p);
          if (s.is_quantifier() && is_prenex(s.body())) binders.push_back(p);
        }
        if (!binders.empty()) {
          const Position& p = binders[pick(binders.size())];
          RuleId r = subformula_at(cur, p).kind() == Connective::Exists ? RuleId::ExistsVar
                                                                          : RuleId::ForallVar;
          step = RewriteStep{r, p, fresh_variable(all_vars(cur))};
        }
      }
      if (!step) {
        if (steps.empty()) break;
        step = steps[pick(steps.size())];
      }

      Formula next;
      try {
        next = apply_step(cur, *step, n);
      } catch (const InapplicableStep& e) {
        t.fail(to_string(*step) + " rejected on " + render(cur) + ": " + e.what());
        break;
      }
      ++applied;
      const std::size_t before = connective_depth_measure(cur);
      const std::size_t after = connective_depth_measure(next);
      t.check(free_vars(next) == free_vars(cur),
              [&] { return "free variables change under " + to_string(*step) + " on " + render(cur); });
      if (is_renaming(step->rule)) {
        t.check(after == before, [&] { return "renaming changes the measure on " + render(cur); });
      } else {
        t.check(after < before, [&] {
          return "measure does not decrease under " + to_string(*step) + " on " + render(cur);
        });
      }
      trace.steps.push_back(*step);
      cur = std::move(next);
    }

    const std::string text = write_trace_text(trace);
    const std::string json = trace_to_json(trace).dump();
    try {
      Trace from_text = read_trace_text(text);
      Trace from_json = trace_from_json(nlohmann::json::parse(json));
      t.check(write_trace_text(from_text) == text, [&] { return "text round trip differs:\n" + text; });
      t.check(trace_to_json(from_json).dump() == json, [&] { return "JSON round trip differs: " + json; });
      t.check(verify_trace(from_text) == cur, [&] { return "text replay differs:\n" + text; });
      t.check(verify_trace(from_json) == cur, [&] { return "JSON replay differs: " + json; });
      t.check(lifts_to_degree(trace, n + 1), [&] { return "trace does not lift:\n" + text; });
    } catch (const std::exception& e) {
      t.fail(std::string("trace round trip threw: ") + e.what() + "\n" + text);
    }
  }
  return t.finish();
}

std::vector<CriterionResult> run_suite(const SuiteConfig& cfg) {
  const std::vector<Formula> formulas = corpus(cfg);
  SweepResult sweep = run_sweep(formulas, cfg);
  return {sweep.characterization,
          sweep.normalizer,
          check_stabilization(formulas, cfg),
          check_class_laws(formulas, cfg),
          sweep.backward_closure,
          check_pinned_negatives(cfg),
          check_rewrite_conformance(cfg)};
}

std::string summary_line(const CriterionResult& r) {
  char buf[128];
  std::snprintf(buf, sizeof buf, " (%zu checks, %zu failures, %.1fs)", r.checks, r.failures,
                r.seconds);
  std::string out = std::string(r.passed ? "PASS " : "FAIL ") + r.name + buf;
  if (!r.passed) out += "\n  first failure: " + r.first_failure;
  return out;
}

}  // namespace prenexify
