// Command-line front end: check, run, judge and props.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chainmail/checker.hpp"
#include "chainmail/config_io.hpp"
#include "chainmail/frontend.hpp"
#include "chainmail/sampling.hpp"

namespace {

using namespace chainmail;

constexpr int kNoViolation = 0;
constexpr int kViolated = 1;
constexpr int kWithheld = 2;
constexpr int kUsage = 3;

struct Inputs {
  std::string internal;
  std::string external;
  std::string driver;
  std::string config;
  std::uint64_t max_steps = Bounds{}.max_steps;
  std::uint64_t max_micro = Bounds{}.max_micro;
  std::uint32_t fuel = Bounds{}.fuel;
  std::uint32_t set_cap = Bounds{}.set_cap;

  Bounds bounds() const { return Bounds{max_steps, max_micro, fuel, set_cap}; }
};

void add_program_options(CLI::App* cmd, Inputs& in, bool with_start) {
  cmd->add_option("--internal", in.internal, "module being checked (.loo)")->required();
  cmd->add_option("--external", in.external, "client module (.loo)");
  if (with_start) {
    auto* d = cmd->add_option("--driver", in.driver, "statements run by the initial object, or @file");
    auto* c = cmd->add_option("--config", in.config, "start from a configuration (JSON) instead");
    d->excludes(c);
    c->excludes(d);
  }
  cmd->add_option("--max-steps", in.max_steps, "total step budget for the run");
  cmd->add_option("--max-micro", in.max_micro, "step budget for one internal burst");
  cmd->add_option("--fuel", in.fuel, "ghost recursion budget");
  cmd->add_option("--set-cap", in.set_cap, "largest heap a set quantifier may range over");
}

ModuleDef load_module(const std::string& path) {
  if (path.empty()) return {};
  return parse_module(read_file(path), path);
}

Program load_program(const Inputs& in) {
  return Program::make(load_module(in.internal), load_module(in.external));
}

Config start_config(const Inputs& in) {
  if (!in.config.empty()) return load_config(in.config);
  if (in.driver.empty()) throw ChainmailError("one of --driver or --config is required");
  if (in.driver[0] == '@') {
    std::string path = in.driver.substr(1);
    return initial(parse_stmts(read_file(path), path));
  }
  return initial(parse_stmts(in.driver));
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("CHAINMAIL_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ChainmailError(std::string("CHAINMAIL_SEED is not a number: ") + env);
    }
  }
  return 0;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ChainmailError("cannot write '" + path + "'");
  out << text;
}

int exit_code(Status s) {
  switch (s) {
    case Status::NoViolationFound: return kNoViolation;
    case Status::Violated: return kViolated;
    case Status::Withheld: return kWithheld;
  }
  return kUsage;
}

struct CheckArgs {
  Inputs in;
  std::string spec;
  std::string format = "json";
  std::string dump_trace;
  std::optional<std::uint64_t> seed;
  bool check_internal = false;
  bool serial = false;
};

int do_check(const CheckArgs& a) {
  Program p = load_program(a.in);
  Spec spec = parse_spec(read_file(a.spec), a.spec);
  Config start = start_config(a.in);
  CheckOptions opts;
  opts.bounds = a.in.bounds();
  opts.check_internal = a.check_internal;
  opts.seed = resolve_seed(a.seed);
  Trace trace = record_trace(p, start, opts.bounds, opts.check_internal);
  if (!a.dump_trace.empty()) write_file(a.dump_trace, trace_to_jsonl(trace));
  Verdict v = a.serial ? check_trace_serial(p, trace, spec, opts) : check_trace(p, trace, spec, opts);
  if (a.format == "text") {
    std::cout << verdict_to_text(v);
  } else {
    std::cout << verdict_to_json(v).dump(2) << "\n";
  }
  return exit_code(v.status);
}

struct RunArgs {
  Inputs in;
  std::string dump_trace;
};

int do_run(const RunArgs& a) {
  Program p = load_program(a.in);
  Trace trace = record_trace(p, start_config(a.in), a.in.bounds(), false);
  std::string text = trace_to_jsonl(trace);
  if (a.dump_trace.empty()) {
    std::cout << text;
  } else {
    write_file(a.dump_trace, text);
  }
  return kNoViolation;
}

struct JudgeArgs {
  Inputs in;
  std::string assertion;
};

int do_judge(const JudgeArgs& a) {
  Program p = load_program(a.in);
  std::string text = a.assertion;
  std::string file = "<assertion>";
  if (!text.empty() && text[0] == '@') {
    file = text.substr(1);
    text = read_file(file);
  }
  AssertionPtr assertion = parse_assertion(text, file);
  Trace trace = record_trace(p, start_config(a.in), a.in.bounds(), false);
  Caveats caveats;
  EvalContext ctx = EvalContext::at(p, trace, 0, &caveats);
  bool holds = false;
  try {
    holds = sat(ctx, *assertion);
  } catch (const BoundsExceeded& e) {
    std::cout << "withheld: " << e.what() << "\n";
    return kWithheld;
  }
  for (const auto& n : caveats.notes) std::cerr << "note: " << n << "\n";
  if (!holds && !caveats.notes.empty()) {
    std::cout << "withheld\n";
    return kWithheld;
  }
  std::cout << (holds ? "holds" : "does not hold") << "\n";
  return holds ? kNoViolation : kViolated;
}

struct PropsArgs {
  std::size_t trials = 500;
  std::size_t linking_trials = 200;
  std::optional<std::uint64_t> seed;
};

int do_props(const PropsArgs& a) {
  const std::uint64_t seed = resolve_seed(a.seed);
  Sampler sampler = default_sampler();
  bool ok = true;
  auto report = [&](const std::string& suite, const EquivalenceReport& r, bool expect_discrepancy) {
    bool pass = expect_discrepancy ? r.discrepancies > 0 : r.discrepancies == 0;
    ok = ok && pass;
    std::cout << (pass ? "pass" : "FAIL") << "  " << suite << ": " << r.name << "  trials=" << r.trials
              << " discrepancies=" << r.discrepancies << " withheld=" << r.withheld
              << (expect_discrepancy ? "  (a discrepancy is expected)" : "") << "\n";
  };
  std::uint64_t k = 0;
  for (const Law& law : classical_laws()) report("classical", check_law(law, sampler, a.trials, seed + k++), false);
  report("classical", check_excluded_middle(sampler, a.trials, seed + k++), false);
  report("classical", check_modus_ponens(sampler, a.trials, seed + k++), false);
  for (const Law& law : mismatched_laws()) {
    report("mismatched", check_law(law, sampler, a.trials, seed + k++), true);
  }
  Sampler nodes = [](std::mt19937_64&) { return node_sample(); };
  EquivalenceReport partial = check_equivalence(parse_assertion("cyc.acyclic = false"),
                                                parse_assertion("not cyc.acyclic"), nodes, a.trials, seed + k++);
  partial.name = "e = false versus not e";
  report("partiality", partial, true);

  auto linking = [&](const std::string& name, const LinkingReport& r) {
    bool pass = r.failures == 0;
    ok = ok && pass;
    std::cout << (pass ? "pass" : "FAIL") << "  linking: " << name << "  trials=" << r.trials
              << " failures=" << r.failures << "\n";
    for (const auto& n : r.notes) std::cout << "        " << n << "\n";
  };
  linking("associativity, commutativity, overlap", check_linking_laws(a.linking_trials, seed + k++));
  linking("step preservation", check_step_preservation(a.linking_trials, seed + k++));
  std::cout << "seed " << seed << "\n";
  return ok ? kNoViolation : kViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Executes object programs against a client module and checks holistic assertions on the run."};
  app.require_subcommand(1);

  CheckArgs check;
  auto* check_cmd = app.add_subcommand("check", "record a run and check a spec at every visible state");
  add_program_options(check_cmd, check.in, true);
  check_cmd->add_option("--spec", check.spec, "spec file (.cmail)")->required();
  check_cmd->add_option("--format", check.format, "report format")->check(CLI::IsMember({"json", "text"}));
  check_cmd->add_option("--dump-trace", check.dump_trace, "also write the trace as JSON lines");
  check_cmd->add_option("--seed", check.seed, "seed recorded in the report (default: CHAINMAIL_SEED or 0)");
  check_cmd->add_flag("--check-internal", check.check_internal,
                      "also check hidden internal states (debugging aid, not the semantics)");
  check_cmd->add_flag("--serial", check.serial, "evaluate cells one at a time");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "record a run and print its visible states");
  add_program_options(run_cmd, run_args.in, true);
  run_cmd->add_option("--dump-trace", run_args.dump_trace, "write the trace here instead of stdout");

  JudgeArgs judge;
  auto* judge_cmd = app.add_subcommand("judge", "decide one assertion at the start configuration");
  add_program_options(judge_cmd, judge.in, true);
  judge_cmd->add_option("--assert", judge.assertion, "assertion text, or @file")->required();

  PropsArgs props;
  auto* props_cmd = app.add_subcommand("props", "run the logical and linking property suites");
  props_cmd->add_option("--trials", props.trials, "instances per law");
  props_cmd->add_option("--linking-trials", props.linking_trials, "instances per linking law");
  props_cmd->add_option("--seed", props.seed, "base seed (default: CHAINMAIL_SEED or 0)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*check_cmd) return do_check(check);
    if (*run_cmd) return do_run(run_args);
    if (*judge_cmd) return do_judge(judge);
    if (*props_cmd) return do_props(props);
  } catch (const std::exception& e) {
    std::cerr << "chainmail: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
