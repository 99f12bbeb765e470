#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prenexify/formula.hpp"

namespace prenexify {

/// The fourteen prenex rules. The N-suffixed ones depend on the degree.
enum class RuleId : std::uint8_t {
  ExistsImp,   // (exists x. A) -> D   ~>  forall x. (A -> D)
  ForallImpN,  // (forall x. A) -> D   ~>  exists x. (A -> D)
  ImpExistsN,  // D -> exists x. A     ~>  exists x. (D -> A)
  ImpForall,   // D -> forall x. A     ~>  forall x. (D -> A)
  ExistsAnd,
  ForallAnd,
  AndExists,
  AndForall,
  ExistsOr,
  ForallOrN,
  OrExists,
  OrForallN,
  ExistsVar,  // exists x. A  ~>  exists y. A[y/x]
  ForallVar,
};

inline constexpr std::size_t kRuleCount = 14;

std::string_view rule_name(RuleId r);
/// Throws std::invalid_argument for unknown names.
RuleId rule_from_name(std::string_view name);
bool is_renaming(RuleId r);
const std::array<RuleId, kRuleCount>& all_rules();

struct RewriteStep {
  RuleId rule = RuleId::ExistsImp;
  Position position;
  /// New name for the bound variable: required by the renaming rules,
  /// otherwise used when the hoisted variable would be captured.
  std::optional<Var> fresh;

  friend bool operator==(const RewriteStep&, const RewriteStep&) = default;
};

std::string to_string(const RewriteStep& s);

struct Trace {
  Formula start;
  std::vector<RewriteStep> steps;
  std::size_t degree = 0;
};

enum class StepFailureReason : std::uint8_t {
  InvalidPosition,
  RuleMismatch,
  StrategyViolation,
  SideCondition,
};

const char* reason_name(StepFailureReason r);

struct StepFailure {
  StepFailureReason reason;
  std::string detail;
};

class InapplicableStep : public std::runtime_error {
 public:
  explicit InapplicableStep(StepFailure failure);
  const StepFailure& failure() const { return failure_; }

 private:
  StepFailure failure_;
};

class TraceError : public std::runtime_error {
 public:
  TraceError(std::size_t step_index, StepFailure failure);
  /// Zero-based index of the first step that failed.
  std::size_t step_index() const { return step_; }
  const StepFailure& failure() const { return failure_; }

 private:
  std::size_t step_;
  StepFailure failure_;
};

/// All hoisting steps that apply anywhere in `f` at degree n, ordered by
/// rule, then leftmost-innermost position. Renaming rules are never listed;
/// `fresh` is set to fresh_variable(all_vars(f)) when capture would occur.
std::vector<RewriteStep> applicable_steps(const Formula& f, std::size_t n);

/// Empty when `s` applies to `f` at degree n.
std::optional<StepFailure> check_step(const Formula& f, const RewriteStep& s, std::size_t n);

/// Throws InapplicableStep.
Formula apply_step(const Formula& f, const RewriteStep& s, std::size_t n);

/// Replays every step; throws TraceError at the first invalid one.
Formula verify_trace(const Trace& t);

/// True iff n' >= t.degree and the trace replays at degree n'.
bool lifts_to_degree(const Trace& t, std::size_t n_prime);

/// Prefixes every step position with `at`.
Trace shift_trace(const Trace& t, const Formula& context, const Position& at);

// Serialization. Text:
//
//   # prenexify trace v1
//   degree 1
//   start (forall x. P(x)) -> false
//   ForallImpN@/
//   ExistsAnd@/b fresh=v0
std::string write_trace_text(const Trace& t);
Trace read_trace_text(std::string_view text);

nlohmann::json trace_to_json(const Trace& t);
Trace trace_from_json(const nlohmann::json& j);

/// Dispatches on the first non-space character ('{' means JSON).
Trace read_trace(std::string_view text);

}  // namespace prenexify
