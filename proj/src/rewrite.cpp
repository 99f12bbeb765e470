#include "prenexify/rewrite.hpp"

#include <algorithm>
#include <sstream>

#include "prenexify/hierarchy.hpp"
#include "prenexify/parser.hpp"
#include "prenexify/semiclassical.hpp"

namespace prenexify {

namespace {

enum class Cond : std::uint8_t { None, BodyInU, OtherInC };

struct RuleSpec {
  std::string_view name;
  Connective root;       // Exists/Forall for the renaming rules
  bool left;             // quantifier is the left operand
  Quantifier in;         // quantifier of the operand being hoisted
  Quantifier out;        // quantifier of the result
  Cond cond;
};

constexpr std::array<RuleSpec, kRuleCount> kSpecs{{
    {"ExistsImp", Connective::Imp, true, Quantifier::Exists, Quantifier::Forall, Cond::None},
    {"ForallImpN", Connective::Imp, true, Quantifier::Forall, Quantifier::Exists, Cond::BodyInU},
    {"ImpExistsN", Connective::Imp, false, Quantifier::Exists, Quantifier::Exists, Cond::OtherInC},
    {"ImpForall", Connective::Imp, false, Quantifier::Forall, Quantifier::Forall, Cond::None},
    {"ExistsAnd", Connective::And, true, Quantifier::Exists, Quantifier::Exists, Cond::None},
    {"ForallAnd", Connective::And, true, Quantifier::Forall, Quantifier::Forall, Cond::None},
    {"AndExists", Connective::And, false, Quantifier::Exists, Quantifier::Exists, Cond::None},
    {"AndForall", Connective::And, false, Quantifier::Forall, Quantifier::Forall, Cond::None},
    {"ExistsOr", Connective::Or, true, Quantifier::Exists, Quantifier::Exists, Cond::None},
    {"ForallOrN", Connective::Or, true, Quantifier::Forall, Quantifier::Forall, Cond::OtherInC},
    {"OrExists", Connective::Or, false, Quantifier::Exists, Quantifier::Exists, Cond::None},
    {"OrForallN", Connective::Or, false, Quantifier::Forall, Quantifier::Forall, Cond::OtherInC},
    {"ExistsVar", Connective::Exists, false, Quantifier::Exists, Quantifier::Exists, Cond::None},
    {"ForallVar", Connective::Forall, false, Quantifier::Forall, Quantifier::Forall, Cond::None},
}};

const RuleSpec& spec(RuleId r) { return kSpecs[static_cast<std::size_t>(r)]; }

StepFailure failure(StepFailureReason r, std::string detail) { return {r, std::move(detail)}; }

std::optional<StepFailure> check_renaming(const Formula& redex, const RewriteStep& s) {
  const RuleSpec& sp = spec(s.rule);
  if (redex.kind() != sp.root) {
    return failure(StepFailureReason::RuleMismatch,
                   std::string(sp.name) + " needs a " +
                       (sp.root == Connective::Exists ? "existential" : "universal") +
                       " at " + s.position.to_string());
  }
  if (!is_prenex(redex.body())) {
    return failure(StepFailureReason::StrategyViolation,
                   "body at " + s.position.to_string() + " is not prenex");
  }
  if (!s.fresh) {
    return failure(StepFailureReason::SideCondition,
                   std::string(sp.name) + " needs a fresh variable");
  }
  if (*s.fresh != redex.bound_var() && all_vars(redex.body()).contains(*s.fresh)) {
    return failure(StepFailureReason::SideCondition,
                   "fresh variable " + *s.fresh + " occurs in the body");
  }
  return std::nullopt;
}

std::optional<StepFailure> check_hoist(const Formula& redex, const RewriteStep& s,
                                       std::size_t n) {
  const RuleSpec& sp = spec(s.rule);
  const std::string where = s.position.to_string();
  if (redex.kind() != sp.root) {
    return failure(StepFailureReason::RuleMismatch,
                   std::string(sp.name) + ": wrong connective at " + where);
  }
  const Formula& quant = sp.left ? redex.lhs() : redex.rhs();
  const Formula& other = sp.left ? redex.rhs() : redex.lhs();
  if (!quant.is_quantifier() || quant.quantifier() != sp.in) {
    return failure(StepFailureReason::RuleMismatch,
                   std::string(sp.name) + ": no " +
                       (sp.in == Quantifier::Exists ? "existential" : "universal") + " on the " +
                       (sp.left ? "left" : "right") + " at " + where);
  }
  if (!is_prenex(redex.lhs()) || !is_prenex(redex.rhs())) {
    return failure(StepFailureReason::StrategyViolation,
                   "redex at " + where + " has a non-prenex proper subformula");
  }
  const Var& x = quant.bound_var();
  const Formula& body = quant.body();
  if (s.fresh) {
    if (*s.fresh != x && all_vars(body).contains(*s.fresh)) {
      return failure(StepFailureReason::SideCondition,
                     "fresh variable " + *s.fresh + " occurs in the quantified formula");
    }
    if (free_vars(other).contains(*s.fresh)) {
      return failure(StepFailureReason::SideCondition,
                     "fresh variable " + *s.fresh + " is free in the other operand");
    }
  } else if (free_vars(other).contains(x)) {
    return failure(StepFailureReason::SideCondition,
                   "bound variable " + x + " is free in the other operand and no fresh name is given");
  }
  switch (sp.cond) {
    case Cond::None:
      break;
    case Cond::BodyInU:
      if (n == 0) {
        return failure(StepFailureReason::SideCondition, std::string(sp.name) + " needs degree > 0");
      }
      if (!in_R(body, n, n)) {
        return failure(StepFailureReason::SideCondition,
                       "quantified formula is not in U_" + std::to_string(n) + "+");
      }
      break;
    case Cond::OtherInC:
      if (!in_D(other, n, n)) {
        return failure(StepFailureReason::SideCondition,
                       "other operand is not in C_" + std::to_string(n) + "+");
      }
      break;
  }
  return std::nullopt;
}

Formula rewrite_redex(const Formula& redex, const RewriteStep& s) {
  const RuleSpec& sp = spec(s.rule);
  if (is_renaming(s.rule)) {
    const Var& y = *s.fresh;
    return Formula::quantified(sp.out, y, rename_free(redex.body(), redex.bound_var(), y));
  }
  const Formula& quant = sp.left ? redex.lhs() : redex.rhs();
  const Formula& other = sp.left ? redex.rhs() : redex.lhs();
  const Var& x = quant.bound_var();
  const Var y = s.fresh.value_or(x);
  Formula body = y == x ? quant.body() : rename_free(quant.body(), x, y);
  Formula inner = sp.left ? Formula::binary(sp.root, std::move(body), other)
                          : Formula::binary(sp.root, other, std::move(body));
  return Formula::quantified(sp.out, y, std::move(inner));
}

}  // namespace

std::string_view rule_name(RuleId r) { return spec(r).name; }

RuleId rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    if (kSpecs[i].name == name) return static_cast<RuleId>(i);
  }
  throw std::invalid_argument("unknown rule '" + std::string(name) + "'");
}

bool is_renaming(RuleId r) { return r == RuleId::ExistsVar || r == RuleId::ForallVar; }

const std::array<RuleId, kRuleCount>& all_rules() {
  static const std::array<RuleId, kRuleCount> rules = [] {
    std::array<RuleId, kRuleCount> out{};
    for (std::size_t i = 0; i < kRuleCount; ++i) out[i] = static_cast<RuleId>(i);
    return out;
  }();
  return rules;
}

std::string to_string(const RewriteStep& s) {
  std::string out(rule_name(s.rule));
  out += '@';
  out += s.position.to_string();
  if (s.fresh) out += " fresh=" + *s.fresh;
  return out;
}

const char* reason_name(StepFailureReason r) {
  switch (r) {
    case StepFailureReason::InvalidPosition: return "invalid-position";
    case StepFailureReason::RuleMismatch: return "rule-mismatch";
    case StepFailureReason::StrategyViolation: return "strategy-violation";
    case StepFailureReason::SideCondition: return "side-condition";
  }
  return "?";
}

InapplicableStep::InapplicableStep(StepFailure f)
    : std::runtime_error(std::string(reason_name(f.reason)) + ": " + f.detail),
      failure_(std::move(f)) {}

TraceError::TraceError(std::size_t step_index, StepFailure f)
    : std::runtime_error("step " + std::to_string(step_index + 1) + " failed: " +
                         reason_name(f.reason) + ": " + f.detail),
      step_(step_index),
      failure_(std::move(f)) {}

std::optional<StepFailure> check_step(const Formula& f, const RewriteStep& s, std::size_t n) {
  if (!is_valid_position(f, s.position)) {
    return failure(StepFailureReason::InvalidPosition,
                   "no subformula at " + s.position.to_string());
  }
  const Formula& redex = subformula_at(f, s.position);
  return is_renaming(s.rule) ? check_renaming(redex, s) : check_hoist(redex, s, n);
}

Formula apply_step(const Formula& f, const RewriteStep& s, std::size_t n) {
  if (auto err = check_step(f, s, n)) throw InapplicableStep(std::move(*err));
  return replace_at(f, s.position, rewrite_redex(subformula_at(f, s.position), s));
}

std::vector<RewriteStep> applicable_steps(const Formula& f, std::size_t n) {
  std::vector<RewriteStep> out;
  std::optional<Var> fresh_name;
  for (const Position& p : positions(f)) {
    const Formula& redex = subformula_at(f, p);
    if (!redex.is_binary()) continue;
    if (!is_prenex(redex.lhs()) || !is_prenex(redex.rhs())) continue;
    for (std::size_t i = 0; i < 12; ++i) {
      const RuleSpec& sp = kSpecs[i];
      if (redex.kind() != sp.root) continue;
      const Formula& quant = sp.left ? redex.lhs() : redex.rhs();
      if (!quant.is_quantifier() || quant.quantifier() != sp.in) continue;
      RewriteStep step{static_cast<RuleId>(i), p, std::nullopt};
      const Formula& other = sp.left ? redex.rhs() : redex.lhs();
      if (free_vars(other).contains(quant.bound_var())) {
        if (!fresh_name) fresh_name = fresh_variable(all_vars(f));
        step.fresh = fresh_name;
      }
      if (!check_hoist(redex, step, n)) out.push_back(std::move(step));
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const RewriteStep& a, const RewriteStep& b) {
    if (a.rule != b.rule) return a.rule < b.rule;
    return postorder_less(a.position, b.position);
  });
  return out;
}

Formula verify_trace(const Trace& t) {
  Formula cur = t.start;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    if (auto err = check_step(cur, t.steps[i], t.degree)) throw TraceError(i, std::move(*err));
    cur = replace_at(cur, t.steps[i].position,
                     rewrite_redex(subformula_at(cur, t.steps[i].position), t.steps[i]));
  }
  return cur;
}

bool lifts_to_degree(const Trace& t, std::size_t n_prime) {
  if (n_prime < t.degree) return false;
  Trace lifted = t;
  lifted.degree = n_prime;
  try {
    verify_trace(lifted);
    return true;
  } catch (const TraceError&) {
    return false;
  }
}

Trace shift_trace(const Trace& t, const Formula& context, const Position& at) {
  Trace out{replace_at(context, at, t.start), {}, t.degree};
  out.steps.reserve(t.steps.size());
  for (const auto& s : t.steps) out.steps.push_back({s.rule, at.concat(s.position), s.fresh});
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

std::string write_trace_text(const Trace& t) {
  std::string out = "# prenexify trace v1\n";
  out += "degree " + std::to_string(t.degree) + "\n";
  out += "start " + render(t.start) + "\n";
  for (const auto& s : t.steps) out += to_string(s) + "\n";
  return out;
}

namespace {

[[noreturn]] void bad_trace(std::size_t line, const std::string& msg) {
  throw std::invalid_argument("trace line " + std::to_string(line) + ": " + msg);
}

RewriteStep parse_step_line(const std::string& line, std::size_t line_no) {
  std::istringstream in(line);
  std::string head, extra;
  in >> head;
  auto at = head.find('@');
  if (at == std::string::npos) bad_trace(line_no, "expected Rule@path");
  RewriteStep s;
  try {
    s.rule = rule_from_name(head.substr(0, at));
    s.position = Position::parse(head.substr(at + 1));
  } catch (const std::invalid_argument& e) {
    bad_trace(line_no, e.what());
  }
  if (in >> extra) {
    if (extra.rfind("fresh=", 0) != 0 || extra.size() == 6) bad_trace(line_no, "expected fresh=<var>");
    s.fresh = extra.substr(6);
  }
  if (in >> extra) bad_trace(line_no, "trailing text '" + extra + "'");
  return s;
}

}  // namespace

Trace read_trace_text(std::string_view text) {
  Trace t;
  bool have_degree = false, have_start = false;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    line = line.substr(first);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line.rfind("degree ", 0) == 0) {
      try {
        t.degree = std::stoul(line.substr(7));
      } catch (const std::exception&) {
        bad_trace(line_no, "bad degree");
      }
      have_degree = true;
    } else if (line.rfind("start ", 0) == 0) {
      try {
        t.start = parse(line.substr(6));
      } catch (const ParseError& e) {
        bad_trace(line_no, e.what());
      }
      have_start = true;
    } else {
      if (!have_start) bad_trace(line_no, "step before 'start'");
      t.steps.push_back(parse_step_line(line, line_no));
    }
  }
  if (!have_degree) bad_trace(line_no, "missing 'degree'");
  if (!have_start) bad_trace(line_no, "missing 'start'");
  return t;
}

nlohmann::json trace_to_json(const Trace& t) {
  nlohmann::json j;
  j["schema"] = "prenexify.trace/1";
  j["degree"] = t.degree;
  j["start"] = render(t.start);
  j["steps"] = nlohmann::json::array();
  for (const auto& s : t.steps) {
    nlohmann::json step{{"rule", std::string(rule_name(s.rule))}, {"path", s.position.to_string()}};
    if (s.fresh) step["fresh"] = *s.fresh;
    j["steps"].push_back(std::move(step));
  }
  return j;
}

Trace trace_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != "prenexify.trace/1") {
    throw std::invalid_argument("unsupported trace schema");
  }
  Trace t;
  t.degree = j.at("degree").get<std::size_t>();
  t.start = parse(j.at("start").get<std::string>());
  for (const auto& s : j.at("steps")) {
    RewriteStep step;
    step.rule = rule_from_name(s.at("rule").get<std::string>());
    step.position = Position::parse(s.at("path").get<std::string>());
    if (s.contains("fresh")) step.fresh = s.at("fresh").get<std::string>();
    t.steps.push_back(std::move(step));
  }
  return t;
}

Trace read_trace(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string_view::npos && text[first] == '{') {
    return trace_from_json(nlohmann::json::parse(text));
  }
  return read_trace_text(text);
}

}  // namespace prenexify
