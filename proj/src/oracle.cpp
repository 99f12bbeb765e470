#include "prenexify/oracle.hpp"

#include <cstdlib>
#include <stdexcept>
#include <unordered_set>

#include "prenexify/parser.hpp"

namespace prenexify {

std::size_t default_budget() {
  if (const char* env = std::getenv("PRENEXIFY_BUDGET")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultBudget;
}

std::optional<std::size_t> ReachableSet::index_of(const Formula& f) const {
  auto it = index_.find(alpha_canonical(f));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ReachableSet::edge_count() const {
  std::size_t total = 0;
  for (const auto& e : edges) total += e.size();
  return total;
}

Trace ReachableSet::trace_to(std::size_t member) const {
  std::vector<const RewriteStep*> path;
  for (std::size_t m = member; parent.at(m);) {
    auto [src, edge] = *parent[m];
    path.push_back(&edges[src][edge].step);
    m = src;
  }
  Trace t{start, {}, n};
  Formula cur = start;
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    const RewriteStep& want = **it;
    bool found = false;
    for (auto& s : applicable_steps(cur, n)) {
      if (s.rule == want.rule && s.position == want.position) {
        cur = apply_step(cur, s, n);
        t.steps.push_back(std::move(s));
        found = true;
        break;
      }
    }
    if (!found) throw std::logic_error("trace_to: step " + to_string(want) + " does not replay");
  }
  return t;
}

namespace {

// Breadth-first closure. Stops early when `stop` accepts a member or the
// member budget is exceeded; returns the accepted member, if any.
std::optional<std::size_t> explore(ReachableSet& rs, std::unordered_map<Formula, std::size_t>& index,
                                   std::size_t budget, const ClassTest* stop) {
  auto add = [&](Formula canon, std::optional<std::pair<std::size_t, std::size_t>> from) {
    std::size_t id = rs.members.size();
    index.emplace(canon, id);
    rs.members.push_back(std::move(canon));
    rs.edges.emplace_back();
    rs.parent.push_back(from);
    return id;
  };
  add(alpha_canonical(rs.start), std::nullopt);
  if (stop && (*stop)(rs.members[0])) return 0;

  for (std::size_t head = 0; head < rs.members.size(); ++head) {
    const Formula cur = rs.members[head];
    for (auto& step : applicable_steps(cur, rs.n)) {
      Formula next = alpha_canonical(apply_step(cur, step, rs.n));
      auto it = index.find(next);
      std::size_t target;
      bool fresh = false;
      if (it != index.end()) {
        target = it->second;
      } else {
        fresh = true;
        if (rs.members.size() >= budget) {
          rs.exhausted = false;
          return std::nullopt;
        }
        target = add(std::move(next), std::make_pair(head, rs.edges[head].size()));
      }
      rs.edges[head].push_back({std::move(step), target});
      if (fresh && stop && (*stop)(rs.members[target])) return target;
    }
  }
  rs.exhausted = true;
  return std::nullopt;
}

}  // namespace

ReachableSet reachable_set(const Formula& f, std::size_t n, std::size_t budget) {
  ReachableSet rs;
  rs.start = f;
  rs.n = n;
  explore(rs, rs.index_, budget, nullptr);
  return rs;
}

nlohmann::json to_json(const ReachableSet& rs) {
  nlohmann::json j;
  j["schema"] = "prenexify.reach/1";
  j["start"] = render(rs.start);
  j["degree"] = rs.n;
  j["exhausted"] = rs.exhausted;
  j["nodes"] = nlohmann::json::array();
  for (const auto& m : rs.members) j["nodes"].push_back(render(m));
  j["edges"] = nlohmann::json::array();
  for (std::size_t i = 0; i < rs.edges.size(); ++i) {
    for (const auto& e : rs.edges[i]) {
      nlohmann::json edge{{"from", i},
                          {"to", e.target},
                          {"rule", std::string(rule_name(e.step.rule))},
                          {"path", e.step.position.to_string()}};
      if (e.step.fresh) edge["fresh"] = *e.step.fresh;
      j["edges"].push_back(std::move(edge));
    }
  }
  return j;
}

const char* reach_name(Reach r) {
  switch (r) {
    case Reach::Yes: return "yes";
    case Reach::No: return "no";
    case Reach::Unknown: return "unknown";
  }
  return "?";
}

ReachResult can_reach(const Formula& f, std::size_t n, const ClassTest& test, std::size_t budget) {
  ReachableSet rs;
  rs.start = f;
  rs.n = n;
  std::unordered_map<Formula, std::size_t> index;
  auto hit = explore(rs, index, budget, &test);
  ReachResult out;
  out.explored = rs.members.size();
  if (hit) {
    out.answer = Reach::Yes;
    out.trace = rs.trace_to(*hit);
  } else {
    out.answer = rs.exhausted ? Reach::No : Reach::Unknown;
  }
  return out;
}

namespace {

void tuples(const std::vector<Var>& pool, std::size_t arity, std::vector<Var>& cur,
            std::vector<std::vector<Var>>& out) {
  if (cur.size() == arity) {
    out.push_back(cur);
    return;
  }
  for (const auto& v : pool) {
    cur.push_back(v);
    tuples(pool, arity, cur, out);
    cur.pop_back();
  }
}

std::vector<Formula> atoms(const Signature& sig) {
  std::vector<Formula> out;
  for (const auto& [pred, arity] : sig.predicates) {
    std::vector<std::vector<Var>> args;
    std::vector<Var> cur;
    tuples(sig.vars, arity, cur, args);
    for (auto& a : args) out.push_back(Formula::prime(pred, std::move(a)));
  }
  return out;
}

}  // namespace

std::vector<Formula> enumerate_formulas(const Signature& sig) {
  std::vector<std::vector<Formula>> by_size(sig.max_size + 1);
  std::unordered_set<Formula> seen;
  std::vector<Formula> out;
  auto emit = [&](Formula f, std::size_t size) {
    if (!seen.insert(alpha_canonical(f)).second) return;
    by_size[size].push_back(f);
    out.push_back(std::move(f));
  };
  if (sig.max_size == 0) return out;

  emit(Formula::falsum(), 1);
  for (auto& a : atoms(sig)) emit(std::move(a), 1);

  static constexpr Connective kBinary[] = {Connective::And, Connective::Or, Connective::Imp};
  for (std::size_t s = 2; s <= sig.max_size; ++s) {
    for (Quantifier q : {Quantifier::Exists, Quantifier::Forall}) {
      for (const auto& v : sig.vars) {
        for (const auto& body : by_size[s - 1]) emit(Formula::quantified(q, v, body), s);
      }
    }
    for (Connective c : kBinary) {
      for (std::size_t a = 1; a + 1 < s; ++a) {
        const std::size_t b = s - 1 - a;
        for (const auto& l : by_size[a]) {
          for (const auto& r : by_size[b]) emit(Formula::binary(c, l, r), s);
        }
      }
    }
  }
  return out;
}

Formula random_formula(std::mt19937_64& rng, const Signature& sig, std::size_t size) {
  if (size == 0) throw std::invalid_argument("random_formula: size must be positive");
  auto pick = [&](std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
  };
  if (size == 1) {
    if (sig.predicates.empty() || pick(6) == 0) return Formula::falsum();
    const auto& [pred, arity] = sig.predicates[pick(sig.predicates.size())];
    std::vector<Var> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(sig.vars[pick(sig.vars.size())]);
    return Formula::prime(pred, std::move(args));
  }
  if (size == 2 || pick(10) < 3) {
    Quantifier q = pick(2) == 0 ? Quantifier::Exists : Quantifier::Forall;
    Var v = sig.vars[pick(sig.vars.size())];
    return Formula::quantified(q, std::move(v), random_formula(rng, sig, size - 1));
  }
  static constexpr Connective kBinary[] = {Connective::And, Connective::Or, Connective::Imp};
  Connective c = kBinary[pick(3)];
  std::size_t left = 1 + pick(size - 2);
  Formula l = random_formula(rng, sig, left);
  Formula r = random_formula(rng, sig, size - 1 - left);
  return Formula::binary(c, std::move(l), std::move(r));
}

}  // namespace prenexify
