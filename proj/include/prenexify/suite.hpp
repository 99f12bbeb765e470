#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prenexify/formula.hpp"
#include "prenexify/oracle.hpp"

namespace prenexify {

inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct SuiteConfig {
  std::size_t max_size = 6;
  std::size_t n_max = 2;
  std::size_t k_max = 4;
  std::uint64_t seed = kDefaultSeed;
  std::size_t random_steps = 10000;
  std::size_t budget = kDefaultBudget;
};

struct CriterionResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string first_failure;
  double seconds = 0;
};

/// {P/1, Q/1} over {x, y}.
Signature corpus_signature(std::size_t max_size);
std::vector<Formula> corpus(const SuiteConfig& cfg);

/// Classifier against exhaustive search, normalizer soundness and backward
/// closure along search edges, computed in one pass.
struct SweepResult {
  CriterionResult characterization;
  CriterionResult normalizer;
  CriterionResult backward_closure;
};
SweepResult run_sweep(const std::vector<Formula>& formulas, const SuiteConfig& cfg);

CriterionResult check_stabilization(const std::vector<Formula>& formulas, const SuiteConfig& cfg);
CriterionResult check_class_laws(const std::vector<Formula>& formulas, const SuiteConfig& cfg);
CriterionResult check_pinned_negatives(const SuiteConfig& cfg);
CriterionResult check_rewrite_conformance(const SuiteConfig& cfg);

/// All seven, in order.
std::vector<CriterionResult> run_suite(const SuiteConfig& cfg);

std::string summary_line(const CriterionResult& r);

}  // namespace prenexify
