#include <doctest.h>

#include <json.hpp>

#include "chainmail/checker.hpp"
#include "chainmail/config_io.hpp"
#include "chainmail/frontend.hpp"
#include "support.hpp"

using namespace chainmail;

namespace {

struct RunCase {
  std::string name;
  Program program;
  StmtList driver;
  Spec spec;
  std::string expected;
};

std::vector<RunCase> manifest_runs() {
  nlohmann::json m = nlohmann::json::parse(read_file(test_support::corpus("manifest.json")));
  std::vector<RunCase> out;
  for (const auto& r : m.at("runs")) {
    out.push_back(RunCase{r.at("name"),
                          test_support::program(r.at("internal"), r.value("external", std::string())),
                          test_support::driver_file(r.at("driver")), test_support::spec_file(r.at("spec")),
                          r.at("expected")});
  }
  return out;
}

}  // namespace

TEST_SUITE("checker") {
  TEST_CASE("an empty spec finds nothing") {
    Program p = test_support::program("safe/safe_v2.loo");
    Verdict v = check_run(p, test_support::driver_file("safe/set_then_take.drv"), Spec{"Empty", {}}, {});
    CHECK(v.status == Status::NoViolationFound);
    CHECK(v.witnesses.empty());
  }

  TEST_CASE("Safe v1 passes and v2 is violated with a replayable witness") {
    Spec spec = test_support::spec_file("safe/holistic.cmail");
    Program v1 = test_support::program("safe/safe_v1.loo");
    for (const char* d : {"safe/wrong_secret.drv", "safe/owner_takes.drv"}) {
      CHECK(check_run(v1, test_support::driver_file(d), spec, {}).status == Status::NoViolationFound);
    }
    Program v2 = test_support::program("safe/safe_v2.loo");
    StmtList driver = test_support::driver_file("safe/set_then_take.drv");
    Trace t = record_trace(v2, driver, Bounds{});
    Verdict v = check_trace(v2, t, spec, {});
    REQUIRE(v.status == Status::Violated);
    REQUIRE(!v.witnesses.empty());
    for (const Witness& w : v.witnesses) {
      CHECK(w.assertion == "holistic");
      CHECK(!replay_witness(v2, t, w));
    }
  }

  TEST_CASE("the report states a per-run claim") {
    CHECK(describe(Status::NoViolationFound) == "no violation found on this run");
    Program p = test_support::program("safe/safe_v1.loo");
    Verdict v = check_run(p, test_support::driver_file("safe/owner_takes.drv"),
                          test_support::spec_file("safe/holistic.cmail"), {});
    CHECK(verdict_to_text(v).find("no violation found on this run") != std::string::npos);
    CHECK(verdict_to_json(v).at("status") == "no-violation-found");
  }

  TEST_CASE("manifest verdicts, parallel and serial") {
    for (const RunCase& r : manifest_runs()) {
      CAPTURE(r.name);
      Trace t = record_trace(r.program, r.driver, Bounds{}, false);
      Verdict par = check_trace(r.program, t, r.spec, {});
      Verdict ser = check_trace_serial(r.program, t, r.spec, {});
      CHECK(std::string(to_string(par.status)) == r.expected);
      CHECK(verdict_to_json(par) == verdict_to_json(ser));
      for (const Witness& w : par.witnesses) CHECK(!replay_witness(r.program, t, w));
    }
  }

  TEST_CASE("excluded middle holds at every state of every corpus run") {
    for (const RunCase& r : manifest_runs()) {
      CAPTURE(r.name);
      Trace t = record_trace(r.program, r.driver, Bounds{}, false);
      for (std::size_t i = 0; i < t.externals.size(); ++i) {
        for (const auto& na : r.spec.assertions) {
          Caveats cav;
          EvalContext ctx = EvalContext::at(r.program, t, i, &cav);
          bool a = false, not_a = false;
          try {
            a = sat(ctx, *na.assertion);
            not_a = sat(ctx, *make_assertion(assertion::Not{na.assertion}));
          } catch (const BoundsExceeded&) {
            continue;
          }
          CHECK(a != not_a);
        }
      }
    }
  }

  TEST_CASE("a step budget makes the verdict withheld") {
    Program p = test_support::program("safe/safe_v2.loo");
    CheckOptions opts;
    opts.bounds.max_steps = 5;
    Verdict v = check_run(p, test_support::driver_file("safe/set_then_take.drv"),
                          test_support::spec_file("safe/empty.cmail"), opts);
    CHECK(v.status == Status::Withheld);
    CHECK(v.trace.truncated);
  }

  TEST_CASE("a set cap below the heap makes the verdict withheld") {
    Program p = test_support::program("bank/ba1.loo", "bank/clients.loo");
    CheckOptions opts;
    opts.bounds.set_cap = 2;
    Verdict v = check_run(p, test_support::driver_file("bank/ba1_deposit.drv"),
                          test_support::spec_file("bank/bank_space.cmail"), opts);
    CHECK(v.status == Status::Withheld);
  }

  TEST_CASE("JSON is identical across repeated checks") {
    Program p = test_support::program("dom/wrapper_leaky.loo", "dom/unknown.loo");
    StmtList d = test_support::driver_file("dom/using_wrappers.drv");
    Spec s = test_support::spec_file("dom/dom.cmail");
    CheckOptions opts;
    opts.seed = 7;
    std::string first = verdict_to_json(check_run(p, d, s, opts)).dump(2);
    for (int i = 0; i < 3; ++i) CHECK(verdict_to_json(check_run(p, d, s, opts)).dump(2) == first);
    CHECK(verdict_to_json(check_run_serial(p, d, s, opts)).dump(2) == first);
  }
}
