#include "chainmail/checker.hpp"

#include "chainmail/sampling.hpp"

#include <sstream>

#include "chainmail/config_io.hpp"
#include "chainmail/frontend.hpp"
#include "chainmail/overloaded.hpp"

namespace chainmail {

std::string_view to_string(Status s) {
  switch (s) {
    case Status::NoViolationFound: return "no-violation-found";
    case Status::Violated: return "violated";
    case Status::Withheld: return "withheld";
  }
  return "unknown";
}

std::string_view describe(Status s) {
  switch (s) {
    case Status::NoViolationFound: return "no violation found on this run";
    case Status::Violated: return "violation found on this run";
    case Status::Withheld: return "verdict withheld on this run: a resource bound was reached";
  }
  return "";
}

namespace {

struct Cell {
  std::size_t position = 0;
  std::optional<std::size_t> micro;
  std::size_t assertion = 0;
};

struct CellResult {
  enum class Outcome { Holds, Fails, Withheld };
  Outcome outcome = Outcome::Holds;
  std::vector<std::string> caveats;
  std::optional<Witness> witness;
  std::string error;
};

std::vector<History> histories(const Trace& t) {
  std::vector<History> out(t.externals.size());
  for (std::size_t i = 1; i < t.externals.size(); ++i) {
    out[i] = push_history(out[i - 1], t.externals[i - 1].config);
  }
  return out;
}

const Config& cell_config(const Trace& t, const Cell& c) {
  const TraceEntry& e = t.externals[c.position];
  return c.micro ? e.burst[*c.micro] : e.config;
}

std::vector<Cell> cells_of(const Trace& t, const Spec& spec, bool check_internal) {
  std::vector<Cell> out;
  for (std::size_t p = 0; p < t.externals.size(); ++p) {
    if (check_internal) {
      for (std::size_t k = 0; k < t.externals[p].burst.size(); ++k) {
        for (std::size_t a = 0; a < spec.assertions.size(); ++a) out.push_back(Cell{p, k, a});
      }
    }
    for (std::size_t a = 0; a < spec.assertions.size(); ++a) out.push_back(Cell{p, std::nullopt, a});
  }
  return out;
}

/// Instantiates outer universal binders with the first falsifying choice.
void peel(EvalContext ctx, AssertionPtr a, Witness& w) {
  using namespace assertion;
  while (true) {
    if (const auto* q = std::get_if<ForallObj>(&a->node)) {
      auto [name, body] = binder_for(ctx.config, q->var, q->body);
      bool found = false;
      for (Address o : heap_objects(ctx.config, q->cls)) {
        EvalContext next = ctx.with_config(bind_top(ctx.config, name, o));
        if (!sat(next, *body)) {
          w.bindings.emplace_back(name, o);
          ctx = std::move(next);
          a = body;
          found = true;
          break;
        }
      }
      if (found) continue;
    } else if (const auto* s = std::get_if<ForallSet>(&a->node)) {
      auto [name, body] = binder_for(ctx.config, s->var, s->body);
      std::vector<Address> dom = heap_objects(ctx.config, std::nullopt);
      bool found = false;
      if (dom.size() <= ctx.bounds.set_cap) {
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dom.size()) && !found; ++mask) {
          AddressSet set;
          for (std::size_t i = 0; i < dom.size(); ++i) {
            if (mask & (std::uint64_t{1} << i)) set.insert(dom[i]);
          }
          EvalContext next = ctx.with_config(bind_top(ctx.config, name, set));
          if (!sat(next, *body)) {
            w.bindings.emplace_back(name, set);
            ctx = std::move(next);
            a = body;
            found = true;
          }
        }
      }
      if (found) continue;
    }
    break;
  }
  w.instance = a;
}

CellResult evaluate_cell(const Program& p, const Trace& t, const std::vector<History>& hist,
                         const Spec& spec, const Cell& cell) {
  CellResult r;
  const NamedAssertion& named = spec.assertions[cell.assertion];
  Caveats caveats;
  EvalContext ctx;
  ctx.program = &p;
  ctx.config = cell_config(t, cell);
  ctx.history = hist[cell.position];
  ctx.bounds = t.bounds;
  ctx.caveats = &caveats;
  try {
    bool holds = sat(ctx, *named.assertion);
    r.caveats.assign(caveats.notes.begin(), caveats.notes.end());
    if (holds) return r;
    if (!caveats.notes.empty()) {
      r.outcome = CellResult::Outcome::Withheld;
      return r;
    }
    r.outcome = CellResult::Outcome::Fails;
    Witness w;
    w.position = cell.position;
    w.micro = cell.micro;
    w.assertion = named.name;
    ctx.caveats = nullptr;
    peel(ctx, named.assertion, w);
    r.witness = std::move(w);
  } catch (const BoundsExceeded& e) {
    r.outcome = CellResult::Outcome::Withheld;
    r.caveats.push_back(e.what());
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  return r;
}

std::string cell_label(const Cell& c, const Spec& spec) {
  std::string where = "position " + std::to_string(c.position);
  if (c.micro) where += " (internal step " + std::to_string(*c.micro) + ")";
  return where + ", assertion " + spec.assertions[c.assertion].name;
}

Verdict aggregate(const Trace& t, const Spec& spec, const CheckOptions& opts, const std::vector<Cell>& cells,
                  std::vector<CellResult>& results) {
  Verdict v;
  v.spec = spec.name;
  v.seeds = {opts.seed};
  v.bounds = t.bounds;
  v.trace = TraceInfo{t.externals.size(), t.total_steps, t.truncated, t.stop};
  bool failed = false;
  bool withheld = false;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& r = results[i];
    if (!r.error.empty()) throw ChainmailError(cell_label(cells[i], spec) + ": " + r.error);
    for (const auto& c : r.caveats) v.caveats.push_back(cell_label(cells[i], spec) + ": " + c);
    if (r.outcome == CellResult::Outcome::Fails) {
      failed = true;
      r.witness->caveats = r.caveats;
      v.witnesses.push_back(std::move(*r.witness));
    } else if (r.outcome == CellResult::Outcome::Withheld) {
      withheld = true;
    }
  }
  if (t.truncated) {
    v.caveats.push_back("the run stopped early: " + t.stop);
    // A stuck run ends normally; one cut off by the step budget leaves later states unchecked.
    if (t.stop.rfind(to_string(StuckReason::BudgetExhausted), 0) == 0) withheld = true;
  }
  v.status = failed ? Status::Violated : withheld ? Status::Withheld : Status::NoViolationFound;
  return v;
}

Trace run_trace(const Program& p, const StmtList& driver, const CheckOptions& opts) {
  return record_trace(p, driver, opts.bounds, opts.check_internal);
}

}  // namespace

Verdict check_trace(const Program& p, const Trace& trace, const Spec& spec, const CheckOptions& opts) {
  std::vector<Cell> cells = cells_of(trace, spec, opts.check_internal);
  std::vector<History> hist = histories(trace);
  std::vector<CellResult> results(cells.size());
  const long n = static_cast<long>(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    results[i] = evaluate_cell(p, trace, hist, spec, cells[i]);
  }
  return aggregate(trace, spec, opts, cells, results);
}

Verdict check_trace_serial(const Program& p, const Trace& trace, const Spec& spec,
                           const CheckOptions& opts) {
  std::vector<Cell> cells = cells_of(trace, spec, opts.check_internal);
  std::vector<History> hist = histories(trace);
  std::vector<CellResult> results;
  results.reserve(cells.size());
  for (const auto& c : cells) results.push_back(evaluate_cell(p, trace, hist, spec, c));
  return aggregate(trace, spec, opts, cells, results);
}

Verdict check_run(const Program& p, const StmtList& driver, const Spec& spec, const CheckOptions& opts) {
  return check_trace(p, run_trace(p, driver, opts), spec, opts);
}

Verdict check_run_serial(const Program& p, const StmtList& driver, const Spec& spec,
                         const CheckOptions& opts) {
  return check_trace_serial(p, run_trace(p, driver, opts), spec, opts);
}

bool replay_witness(const Program& p, const Trace& trace, const Witness& w) {
  Cell cell{w.position, w.micro, 0};
  EvalContext ctx;
  ctx.program = &p;
  Config c = cell_config(trace, cell);
  for (const auto& [name, value] : w.bindings) c = bind_top(c, name, value);
  ctx.config = std::move(c);
  ctx.history = histories(trace)[w.position];
  ctx.bounds = trace.bounds;
  return sat(ctx, *w.instance);
}

nlohmann::json verdict_to_json(const Verdict& v) {
  using nlohmann::json;
  json witnesses = json::array();
  for (const auto& w : v.witnesses) {
    json bindings = json::object();
    for (const auto& [name, value] : w.bindings) bindings[name] = to_string(value);
    json entry = {{"position", w.position},
                  {"assertion", w.assertion},
                  {"instance", print_assertion(*w.instance)},
                  {"bindings", bindings},
                  {"caveats", w.caveats}};
    if (w.micro) entry["internal_step"] = *w.micro;
    witnesses.push_back(std::move(entry));
  }
  return {{"status", to_string(v.status)},
          {"summary", describe(v.status)},
          {"spec", v.spec},
          {"witnesses", witnesses},
          {"caveats", v.caveats},
          {"seeds", v.seeds},
          {"bounds",
           {{"max_steps", v.bounds.max_steps},
            {"max_micro", v.bounds.max_micro},
            {"fuel", v.bounds.fuel},
            {"set_cap", v.bounds.set_cap}}},
          {"trace",
           {{"visible_states", v.trace.visible_states},
            {"micro_steps", v.trace.micro_steps},
            {"truncated", v.trace.truncated},
            {"stop", v.trace.stop}}}};
}

std::string verdict_to_text(const Verdict& v) {
  std::ostringstream out;
  out << v.spec << ": " << describe(v.status) << "\n";
  out << "  " << v.trace.visible_states << " visible states, " << v.trace.micro_steps
      << " steps, stopped: " << v.trace.stop << "\n";
  for (const auto& w : v.witnesses) {
    out << "  witness at position " << w.position;
    if (w.micro) out << " (internal step " << *w.micro << ")";
    out << ": " << w.assertion << "\n    " << print_assertion(*w.instance) << "\n";
    for (const auto& [name, value] : w.bindings) out << "    " << name << " = " << to_string(value) << "\n";
  }
  for (const auto& c : v.caveats) out << "  note: " << c << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Property harness

namespace {

struct SideResults {
  bool lhs = false;
  bool rhs = false;
};

std::optional<SideResults> both_sides(const Sample& s, const Assertion& a, const Assertion& b) {
  EvalContext ctx = EvalContext::at(*s.program, *s.trace, s.position, nullptr);
  try {
    return SideResults{sat(ctx, a), sat(ctx, b)};
  } catch (const BoundsExceeded&) {
    return std::nullopt;
  }
}

std::string disagreement(const Sample& s, const Assertion& a, const Assertion& b, const SideResults& r) {
  return s.label + "\n  " + print_assertion(a) + "  => " + (r.lhs ? "true" : "false") + "\n  " +
         print_assertion(b) + "  => " + (r.rhs ? "true" : "false");
}

AssertionPtr mk(Assertion::Node n) { return make_assertion(std::move(n)); }
AssertionPtr neg(AssertionPtr a) { return mk(assertion::Not{std::move(a)}); }
AssertionPtr conj(AssertionPtr a, AssertionPtr b) { return mk(assertion::And{std::move(a), std::move(b)}); }
AssertionPtr disj(AssertionPtr a, AssertionPtr b) { return mk(assertion::Or{std::move(a), std::move(b)}); }
AssertionPtr constant(bool b) { return mk(assertion::ExprHolds{make_expr(expr::BoolLit{b})}); }

using Metavars = std::function<std::pair<AssertionPtr, AssertionPtr>(AssertionPtr, AssertionPtr, AssertionPtr)>;

Law propositional(std::string name, Metavars f) {
  return Law{std::move(name), [f](std::mt19937_64& rng, const Sample& s) {
               AssertionPtr a = random_assertion(rng, s, 2);
               AssertionPtr b = random_assertion(rng, s, 2);
               AssertionPtr c = random_assertion(rng, s, 2);
               return f(a, b, c);
             }};
}

/// A law over `Q x. A` where A may mention x.
Law quantified(std::string name, bool set_quantifier,
               std::function<std::pair<AssertionPtr, AssertionPtr>(const Identifier&, AssertionPtr)> f) {
  return Law{std::move(name), [set_quantifier, f](std::mt19937_64& rng, const Sample& s) {
               Sample scoped = s;
               Identifier x = set_quantifier ? "QS" : "qx";
               (set_quantifier ? scoped.set_variables : scoped.variables).push_back(x);
               return f(x, random_assertion(rng, scoped, 2));
             }};
}

}  // namespace

EquivalenceReport check_equivalence(const AssertionPtr& a, const AssertionPtr& b, const Sampler& sampler,
                                    std::size_t trials, std::uint64_t seed) {
  EquivalenceReport r;
  r.name = print_assertion(*a) + "  ==  " + print_assertion(*b);
  r.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Sample s = sampler(rng);
    ++r.trials;
    auto res = both_sides(s, *a, *b);
    if (!res) {
      ++r.withheld;
      continue;
    }
    if (res->lhs != res->rhs) {
      if (!r.witness) r.witness = disagreement(s, *a, *b, *res);
      ++r.discrepancies;
    }
  }
  return r;
}

EquivalenceReport check_law(const Law& law, const Sampler& sampler, std::size_t trials, std::uint64_t seed) {
  EquivalenceReport r;
  r.name = law.name;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Sample s = sampler(rng);
    auto [a, b] = law.instance(rng, s);
    ++r.trials;
    auto res = both_sides(s, *a, *b);
    if (!res) {
      ++r.withheld;
      continue;
    }
    if (res->lhs != res->rhs) {
      if (!r.witness) r.witness = disagreement(s, *a, *b, *res);
      ++r.discrepancies;
    }
  }
  return r;
}

std::vector<Law> classical_laws() {
  using namespace assertion;
  return {
      propositional("A and not A == false", [](auto a, auto, auto) { return std::pair{conj(a, neg(a)), constant(false)}; }),
      propositional("A or not A == true", [](auto a, auto, auto) { return std::pair{disj(a, neg(a)), constant(true)}; }),
      propositional("A and A' == A' and A", [](auto a, auto b, auto) { return std::pair{conj(a, b), conj(b, a)}; }),
      propositional("A or A' == A' or A", [](auto a, auto b, auto) { return std::pair{disj(a, b), disj(b, a)}; }),
      propositional("(A or A') or A'' == A or (A' or A'')",
                    [](auto a, auto b, auto c) { return std::pair{disj(disj(a, b), c), disj(a, disj(b, c))}; }),
      propositional("(A or A') and A'' == (A and A'') or (A' and A'')",
                    [](auto a, auto b, auto c) {
                      return std::pair{conj(disj(a, b), c), disj(conj(a, c), conj(b, c))};
                    }),
      propositional("(A and A') or A'' == (A or A'') and (A' or A'')",
                    [](auto a, auto b, auto c) {
                      return std::pair{disj(conj(a, b), c), conj(disj(a, c), disj(b, c))};
                    }),
      propositional("not (A and A') == not A or not A'",
                    [](auto a, auto b, auto) { return std::pair{neg(conj(a, b)), disj(neg(a), neg(b))}; }),
      propositional("not (A or A') == not A and not A'",
                    [](auto a, auto b, auto) { return std::pair{neg(disj(a, b)), conj(neg(a), neg(b))}; }),
      quantified("not (exists x. A) == forall x. not A", false,
                 [](const Identifier& x, AssertionPtr a) {
                   return std::pair{neg(mk(ExistsObj{x, std::nullopt, a})), mk(ForallObj{x, std::nullopt, neg(a)})};
                 }),
      quantified("not (exists S:SET. A) == forall S:SET. not A", true,
                 [](const Identifier& x, AssertionPtr a) {
                   return std::pair{neg(mk(ExistsSet{x, a})), mk(ForallSet{x, neg(a)})};
                 }),
      quantified("not (forall x. A) == exists x. not A", false,
                 [](const Identifier& x, AssertionPtr a) {
                   return std::pair{neg(mk(ForallObj{x, std::nullopt, a})), mk(ExistsObj{x, std::nullopt, neg(a)})};
                 }),
      quantified("not (forall S:SET. A) == exists S:SET. not A", true,
                 [](const Identifier& x, AssertionPtr a) {
                   return std::pair{neg(mk(ForallSet{x, a})), mk(ExistsSet{x, neg(a)})};
                 }),
  };
}

std::vector<Law> mismatched_laws() {
  return {
      propositional("(A or A') and A'' == (A and A') or (A and A'')",
                    [](auto a, auto b, auto c) {
                      return std::pair{conj(disj(a, b), c), disj(conj(a, b), conj(a, c))};
                    }),
      propositional("(A and A') or A'' == (A or A') and (A or A'')",
                    [](auto a, auto b, auto c) {
                      return std::pair{disj(conj(a, b), c), conj(disj(a, b), disj(a, c))};
                    }),
      propositional("not (A and A') == not A or not A''",
                    [](auto a, auto b, auto c) { return std::pair{neg(conj(a, b)), disj(neg(a), neg(c))}; }),
  };
}

EquivalenceReport check_excluded_middle(const Sampler& sampler, std::size_t trials, std::uint64_t seed) {
  EquivalenceReport r;
  r.name = "exactly one of A, not A";
  r.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Sample s = sampler(rng);
    AssertionPtr a = random_assertion(rng, s, 3);
    AssertionPtr na = neg(a);
    ++r.trials;
    auto res = both_sides(s, *a, *na);
    if (!res) {
      ++r.withheld;
      continue;
    }
    if (res->lhs == res->rhs) {
      if (!r.witness) r.witness = disagreement(s, *a, *na, *res);
      ++r.discrepancies;
    }
  }
  return r;
}

EquivalenceReport check_modus_ponens(const Sampler& sampler, std::size_t trials, std::uint64_t seed) {
  EquivalenceReport r;
  r.name = "A and (A -> A') give A'";
  r.seed = seed;
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    Sample s = sampler(rng);
    AssertionPtr a = random_assertion(rng, s, 2);
    AssertionPtr b = random_assertion(rng, s, 2);
    // Bias towards cases where the premise holds: half the time use A' := A or B.
    if (t % 2 == 0) b = disj(a, b);
    AssertionPtr imp = mk(assertion::Implies{a, b});
    ++r.trials;
    EvalContext ctx = EvalContext::at(*s.program, *s.trace, s.position, nullptr);
    try {
      if (sat(ctx, *a) && sat(ctx, *imp) && !sat(ctx, *b)) {
        if (!r.witness) r.witness = s.label + "\n  " + print_assertion(*a) + "\n  " + print_assertion(*b);
        ++r.discrepancies;
      }
    } catch (const BoundsExceeded&) {
      ++r.withheld;
    }
  }
  return r;
}

LinkingReport check_linking_laws(std::size_t trials, std::uint64_t seed) {
  LinkingReport r;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  auto fail = [&](const std::string& why) {
    ++r.failures;
    if (r.notes.size() < 5) r.notes.push_back(why);
  };
  for (std::size_t t = 0; t < trials; ++t) {
    ++r.trials;
    ModuleDef a = random_module(rng, "A", 3);
    ModuleDef b = random_module(rng, "B", 3);
    ModuleDef c = random_module(rng, "C", 3);
    if (!same_module(link(link(a, b), c), link(a, link(b, c)))) fail("associativity, trial " + std::to_string(t));
    if (!same_module(link(a, b), link(b, a))) fail("commutativity, trial " + std::to_string(t));

    ModuleDef clash = random_module(rng, "A", 3);
    std::optional<std::vector<ClassId>> left, right;
    try {
      link(a, clash);
    } catch (const OverlapError& e) {
      left = e.classes();
    }
    try {
      link(clash, a);
    } catch (const OverlapError& e) {
      right = e.classes();
    }
    if (!left || !right || *left != *right) fail("overlap symmetry, trial " + std::to_string(t));
  }
  return r;
}

LinkingReport check_step_preservation(std::size_t trials, std::uint64_t seed) {
  LinkingReport r;
  r.seed = seed;
  std::mt19937_64 rng(seed);
  std::size_t attempts = 0;
  while (r.trials < trials && attempts < 100 * trials) {
    ++attempts;
    auto [m, config] = random_step_instance(rng);
    StepOutcome alone = step(m, config);
    if (!alone.is_stepped()) continue;
    ++r.trials;
    ModuleDef other = random_module(rng, "D", 3);
    StepOutcome linked = step(link(m, other), config);
    if (!linked.is_stepped() || !(*linked.config == *alone.config)) {
      ++r.failures;
      if (r.notes.size() < 5) r.notes.push_back("step differs under linking: " + print_stmts(config.top().contn.statements()));
    }
  }
  if (r.trials < trials) {
    ++r.failures;
    r.notes.push_back("only " + std::to_string(r.trials) + " steppable instances in " + std::to_string(attempts) +
                      " attempts");
  }
  return r;
}

}  // namespace chainmail
