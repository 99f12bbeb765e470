#pragma once

#include <stdexcept>
#include <string>

#include <json.hpp>

#include "prenexify/formula.hpp"
#include "prenexify/hierarchy.hpp"
#include "prenexify/rewrite.hpp"
#include "prenexify/semiclassical.hpp"

namespace prenexify {

/// Sigma selects Sigma_k+, Pi selects Pi_k+.
using Target = PrenexKind;

const char* target_name(Target t);

struct NormalizationResult {
  Formula input;
  std::size_t n = 0;
  std::size_t k = 0;
  Target target = Target::Sigma;
  Formula output;
  Trace trace;
};

nlohmann::json to_json(const NormalizationResult& r);

struct MergeResult {
  Formula output;
  Trace trace;
};

class NotInClass : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PreconditionViolated : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Produces a prenex formula in Sigma_k+ together with a degree-n trace.
/// Throws NotInClass unless f is in J_k^n.
NormalizationResult normalize_J(const Formula& f, std::size_t k, std::size_t n);
/// Same for R_k^n and Pi_k+.
NormalizationResult normalize_R(const Formula& f, std::size_t k, std::size_t n);
NormalizationResult normalize(const Formula& f, Target target, std::size_t k, std::size_t n);

/// psi1, psi2 in target_k+; result in target_k+.
MergeResult merge_and(const Formula& psi1, const Formula& psi2, std::size_t k, Target target,
                      std::size_t n);

/// k <= n, and either one side in Sigma_k+ or Pi_k+ with the other in
/// target_{k+i+1}+, or (i = 0) both sides in target_{k+1}+, which for Pi
/// also needs k + 1 <= n. Result in target_{k+i+1}+.
MergeResult merge_or(const Formula& psi1, const Formula& psi2, std::size_t k, std::size_t i,
                     Target target, std::size_t n);

/// k <= n. Sigma: psi1 in Sigma_k+ or Pi_k+, psi2 in Sigma_{k+i+1}+.
/// Pi: psi1 in Sigma_{k+1}+, psi2 in Pi_{k+i+1}+. Result in target_{k+i+1}+.
MergeResult merge_imp(const Formula& psi1, const Formula& psi2, std::size_t k, std::size_t i,
                      Target target, std::size_t n);

}  // namespace prenexify
