#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "prenexify/formula.hpp"
#include "prenexify/rewrite.hpp"

namespace prenexify {

inline constexpr std::size_t kDefaultBudget = 100000;

/// kDefaultBudget, or PRENEXIFY_BUDGET when set to a positive integer.
std::size_t default_budget();

struct ReachEdge {
  RewriteStep step;  // relative to the source member
  std::size_t target;
};

/// Everything reachable from `start` under degree-n rewriting, one member
/// per alpha class, in breadth-first order.
struct ReachableSet {
  Formula start;
  std::size_t n = 0;
  std::vector<Formula> members;  // alpha-canonical; members[0] is the start
  std::vector<std::vector<ReachEdge>> edges;
  /// (member, edge index) that first discovered each member.
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent;
  bool exhausted = false;

  std::optional<std::size_t> index_of(const Formula& f) const;
  std::size_t edge_count() const;

  /// Trace from `start` to the member, replayed on the original names.
  Trace trace_to(std::size_t member) const;

 private:
  friend ReachableSet reachable_set(const Formula&, std::size_t, std::size_t);
  std::unordered_map<Formula, std::size_t> index_;
};

ReachableSet reachable_set(const Formula& f, std::size_t n, std::size_t budget = default_budget());

nlohmann::json to_json(const ReachableSet& rs);

using ClassTest = std::function<bool(const Formula&)>;

enum class Reach : std::uint8_t { Yes, No, Unknown };
const char* reach_name(Reach r);

struct ReachResult {
  Reach answer = Reach::Unknown;
  std::optional<Trace> trace;  // shortest witness when Yes
  std::size_t explored = 0;
};

/// Breadth-first; stops at the first member passing `test`.
ReachResult can_reach(const Formula& f, std::size_t n, const ClassTest& test,
                      std::size_t budget = default_budget());

struct Signature {
  std::vector<std::pair<std::string, std::size_t>> predicates;
  std::vector<Var> vars;
  std::size_t max_size = 1;
};

/// Every formula over `sig` with at most max_size nodes, one per alpha class.
/// Order: by size; within a size, falsum, atoms (predicate order, argument
/// tuples lexicographic over the pool), then exists and forall over each
/// pool variable, then and, or, imp by increasing left size. Operands are
/// drawn from the earlier output in its order.
std::vector<Formula> enumerate_formulas(const Signature& sig);

/// Random formula with exactly `size` nodes.
Formula random_formula(std::mt19937_64& rng, const Signature& sig, std::size_t size);

}  // namespace prenexify
