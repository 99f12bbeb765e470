#include <algorithm>
#include <atomic>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "prenexify/hierarchy.hpp"
#include "prenexify/normalizer.hpp"
#include "prenexify/oracle.hpp"
#include "prenexify/parser.hpp"
#include "prenexify/rewrite.hpp"
#include "prenexify/semiclassical.hpp"
#include "prenexify/suite.hpp"

using namespace prenexify;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kFail = 1, kInput = 2, kNotInClass = 3, kUnknown = 4 };

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

struct Globals {
  std::string sig;
  std::size_t budget = 0;  // 0: environment or default

  std::optional<Arities> arities() const {
    if (sig.empty()) return std::nullopt;
    return parse_signature("sig " + sig);
  }
  std::size_t effective_budget() const { return budget ? budget : default_budget(); }
};

Formula parse_arg(const std::string& text, const Globals& g) {
  auto sig = g.arities();
  return parse(text, sig ? &*sig : nullptr);
}

Target parse_target(const std::string& s) { return s == "pi" ? Target::Pi : Target::Sigma; }

json error_json(const ParseError& e) {
  return {{"line", e.line()}, {"column", e.column()}, {"message", e.message()}};
}

Corpus load_corpus(const std::string& path, const Globals& g) {
  Corpus c = parse_corpus(slurp(path));
  if (auto sig = g.arities(); sig && !c.signature) {
    // Re-check every entry against the configured signature.
    for (auto& e : c.entries) {
      if (!e.formula) continue;
      try {
        e.formula = parse(e.text, &*sig);
      } catch (const ParseError& err) {
        e.formula.reset();
        e.error = ParseError(e.line, err.column(), err.message());
      }
    }
  }
  return c;
}

int report_parse_errors(const Corpus& c, const std::string& path) {
  int errors = 0;
  for (const auto& e : c.entries) {
    if (!e.error) continue;
    ++errors;
    std::cerr << path << ":" << e.error->line() << ":" << e.error->column() << ": "
              << e.error->message() << "\n";
  }
  return errors;
}

// ---- parse

int cmd_parse(const std::string& path, const Globals& g) {
  Corpus c = load_corpus(path, g);
  for (const auto& e : c.entries) {
    json rec{{"schema", "prenexify.parse/1"}, {"line", e.line}, {"text", e.text}};
    if (e.formula) {
      rec["formula"] = render(*e.formula);
      rec["ast"] = to_json(*e.formula);
      rec["size"] = e.formula->size();
    } else {
      rec["error"] = error_json(*e.error);
    }
    std::cout << rec.dump() << "\n";
  }
  return report_parse_errors(c, path) ? kInput : kOk;
}

// ---- classify

struct ClassifyOptions {
  std::vector<std::size_t> degrees{0, 1, 2};
  std::size_t k_max = 4;
  unsigned jobs = 0;
};

json shape_json(const Formula& f) {
  auto shape = classify_prenex(f);
  if (!shape) return nullptr;
  return {{"kind", shape->kind == PrenexKind::Sigma ? "sigma" : "pi"},
          {"level", shape->level},
          {"blocks", shape->blocks}};
}

json classify_record(const CorpusEntry& e, const ClassifyOptions& opt) {
  json rec{{"schema", "prenexify.classify/1"}, {"line", e.line}};
  if (!e.formula) {
    rec["text"] = e.text;
    rec["error"] = error_json(*e.error);
    return rec;
  }
  const Formula& f = *e.formula;
  rec["formula"] = render(f);
  rec["prenex"] = shape_json(f);
  json sp = json::array(), pp = json::array();
  for (std::size_t k = 0; k <= opt.k_max; ++k) {
    sp.push_back(in_sigma_plus(f, k));
    pp.push_back(in_pi_plus(f, k));
  }
  rec["sigma_plus"] = std::move(sp);
  rec["pi_plus"] = std::move(pp);

  json grid = json::array();
  for (std::size_t n : opt.degrees) {
    MembershipTable t(f, n, opt.k_max);
    json js = json::array(), rs = json::array();
    for (std::size_t k = 0; k <= opt.k_max; ++k) {
      js.push_back(t.J(k));
      rs.push_back(t.R(k));
    }
    MinLevels ml = min_levels(f, n);
    json levels{{"k_J", ml.k_J ? json(*ml.k_J) : json(nullptr)},
                {"k_R", ml.k_R ? json(*ml.k_R) : json(nullptr)},
                {"k_max", ml.k_max}};
    grid.push_back({{"n", n}, {"J", std::move(js)}, {"R", std::move(rs)},
                    {"min_levels", std::move(levels)}});
  }
  rec["grid"] = std::move(grid);
  return rec;
}

int cmd_classify(const std::string& path, const ClassifyOptions& opt, const Globals& g) {
  Corpus c = load_corpus(path, g);
  const unsigned jobs =
      opt.jobs ? opt.jobs : std::max(1U, std::thread::hardware_concurrency());

  // Chunks keep memory bounded while preserving input order.
  constexpr std::size_t kChunk = 256;
  std::vector<std::string> out;
  for (std::size_t base = 0; base < c.entries.size(); base += kChunk) {
    const std::size_t end = std::min(c.entries.size(), base + kChunk);
    out.assign(end - base, {});
    std::atomic<std::size_t> next{base};
    auto work = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < end;) {
        out[i - base] = classify_record(c.entries[i], opt).dump();
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < jobs; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (const auto& line : out) std::cout << line << "\n";
  }
  return report_parse_errors(c, path) ? kInput : kOk;
}

// ---- normalize

void write_trace(const Trace& t, const std::string& path, const std::string& format) {
  if (format == "json") {
    spit(path, trace_to_json(t).dump(2) + "\n");
  } else {
    spit(path, write_trace_text(t));
  }
}

int cmd_normalize(const std::string& text, std::size_t k, std::size_t n, const std::string& target,
                  const std::string& trace_out, const std::string& trace_format,
                  const Globals& g) {
  const Formula f = parse_arg(text, g);
  try {
    NormalizationResult r = normalize(f, parse_target(target), k, n);
    json j = to_json(r);
    if (!trace_out.empty()) {
      write_trace(r.trace, trace_out, trace_format);
      j["trace_file"] = trace_out;
    }
    std::cout << j.dump() << "\n";
    return kOk;
  } catch (const NotInClass& e) {
    std::cerr << "not in class: " << e.what() << "\n";
    return kNotInClass;
  }
}

// ---- verify

int cmd_verify(const std::string& path) {
  Trace t;
  try {
    t = read_trace(slurp(path));
  } catch (const ParseError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kInput;
  } catch (const json::exception& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return kInput;
  }
  try {
    Formula out = verify_trace(t);
    json j{{"schema", "prenexify.verify/1"},
           {"start", render(t.start)},
           {"degree", t.degree},
           {"steps", t.steps.size()},
           {"output", render(out)},
           {"ok", true}};
    std::cout << j.dump() << "\n";
    return kOk;
  } catch (const TraceError& e) {
    json j{{"schema", "prenexify.verify/1"},
           {"start", render(t.start)},
           {"degree", t.degree},
           {"ok", false},
           {"failed_step", e.step_index() + 1},
           {"reason", reason_name(e.failure().reason)},
           {"detail", e.failure().detail}};
    std::cout << j.dump() << "\n";
    std::cerr << e.what() << "\n";
    return kFail;
  }
}

// ---- search

int cmd_search(const std::string& text, std::size_t n, std::size_t k, const std::string& target,
               const std::string& trace_out, const std::string& trace_format,
               const Globals& g) {
  const Formula f = parse_arg(text, g);
  const Target t = parse_target(target);
  ReachResult r = can_reach(f, n, [&](const Formula& h) { return in_plus(h, t, k); },
                            g.effective_budget());
  json j{{"schema", "prenexify.search/1"},
         {"formula", render(f)},
         {"n", n},
         {"k", k},
         {"target", target_name(t)},
         {"answer", reach_name(r.answer)},
         {"explored", r.explored}};
  if (r.trace) {
    j["output"] = render(verify_trace(*r.trace));
    j["trace"] = trace_to_json(*r.trace);
    if (!trace_out.empty()) {
      write_trace(*r.trace, trace_out, trace_format);
      j["trace_file"] = trace_out;
    }
  }
  std::cout << j.dump() << "\n";
  return r.answer == Reach::Unknown ? kUnknown : kOk;
}

// ---- selftest

int cmd_selftest(SuiteConfig cfg, const Globals& g) {
  cfg.budget = g.effective_budget();
  bool ok = true;
  for (const auto& r : run_suite(cfg)) {
    std::cout << summary_line(r) << "\n" << std::flush;
    ok = ok && r.passed;
  }
  std::cout << (ok ? "selftest passed" : "selftest FAILED") << "\n";
  return ok ? kOk : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prenex normal forms for intuitionistic and semi-classical first-order logic"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file with global or per-command options");

  Globals g;
  app.add_option("--sig", g.sig, "predicate signature, e.g. \"P/1 Q/1 R/2\"");
  app.add_option("--budget", g.budget, "search member budget (default: $PRENEXIFY_BUDGET or 100000)");

  std::string input = "-";
  auto* parse_cmd = app.add_subcommand("parse", "parse a corpus and print the AST per line");
  parse_cmd->add_option("input", input, "corpus file, - for stdin");

  ClassifyOptions copt;
  auto* classify_cmd = app.add_subcommand("classify", "J/R verdict grid for every corpus line");
  classify_cmd->add_option("input", input, "corpus file, - for stdin");
  classify_cmd->add_option("--n", copt.degrees, "degrees to classify at")->delimiter(',');
  classify_cmd->add_option("--k-max", copt.k_max, "highest level in the grid");
  classify_cmd->add_option("-j,--jobs", copt.jobs, "worker threads (default: all cores)");

  std::string formula, target = "sigma", trace_out, trace_format = "text";
  std::size_t k = 1, n = 0;
  auto target_check = CLI::IsMember({"sigma", "pi"});
  auto format_check = CLI::IsMember({"text", "json"});

  auto* normalize_cmd = app.add_subcommand("normalize", "rewrite into prenex form with a trace");
  normalize_cmd->add_option("formula", formula)->required();
  normalize_cmd->add_option("--k", k)->required();
  normalize_cmd->add_option("--n", n)->required();
  normalize_cmd->add_option("--target", target)->check(target_check);
  normalize_cmd->add_option("--trace-out", trace_out, "write the trace here");
  normalize_cmd->add_option("--trace-format", trace_format)->check(format_check);

  std::string trace_in;
  auto* verify_cmd = app.add_subcommand("verify", "replay a trace file");
  verify_cmd->add_option("trace", trace_in)->required();

  auto* search_cmd = app.add_subcommand("search", "exhaustive search for a prenex form");
  search_cmd->add_option("formula", formula)->required();
  search_cmd->add_option("--k", k)->required();
  search_cmd->add_option("--n", n)->required();
  search_cmd->add_option("--target", target)->check(target_check);
  search_cmd->add_option("--trace-out", trace_out, "write the witness trace here");
  search_cmd->add_option("--trace-format", trace_format)->check(format_check);

  SuiteConfig scfg;
  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");
  selftest_cmd->add_option("--size", scfg.max_size, "largest corpus formula size");
  selftest_cmd->add_option("--n-max", scfg.n_max);
  selftest_cmd->add_option("--k-max", scfg.k_max);
  selftest_cmd->add_option("--seed", scfg.seed, "seed for the random rewrite walk");
  selftest_cmd->add_option("--steps", scfg.random_steps, "random rewrite steps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (*parse_cmd) return cmd_parse(input, g);
    if (*classify_cmd) return cmd_classify(input, copt, g);
    if (*normalize_cmd) return cmd_normalize(formula, k, n, target, trace_out, trace_format, g);
    if (*verify_cmd) return cmd_verify(trace_in);
    if (*search_cmd) return cmd_search(formula, n, k, target, trace_out, trace_format, g);
    if (*selftest_cmd) return cmd_selftest(scfg, g);
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.line() << ":" << e.column() << ": " << e.message() << "\n";
    return kInput;
  } catch (const InputError& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const PreconditionViolated& e) {
    std::cerr << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInput;
}
