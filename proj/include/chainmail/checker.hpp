#pragma once

#include <cstdint>
#include <functional>
#include <json.hpp>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chainmail/assertions.hpp"
#include "chainmail/interpreter.hpp"

namespace chainmail {

enum class Status { NoViolationFound, Violated, Withheld };

std::string_view to_string(Status s);
/// Report wording; the strongest positive claim is about this run only.
std::string_view describe(Status s);

struct Witness {
  std::size_t position = 0;
  /// Set when the failing configuration is interior to the burst leading to `position`.
  std::optional<std::size_t> micro;
  std::string assertion;
  /// The assertion after peeling the outer universal binders that the bindings instantiate.
  AssertionPtr instance;
  std::vector<std::pair<Identifier, Value>> bindings;
  std::vector<std::string> caveats;
};

struct TraceInfo {
  std::size_t visible_states = 0;
  std::uint64_t micro_steps = 0;
  bool truncated = false;
  std::string stop;
};

struct Verdict {
  Status status = Status::NoViolationFound;
  std::string spec;
  std::vector<Witness> witnesses;
  std::vector<std::string> caveats;
  std::vector<std::uint64_t> seeds;
  Bounds bounds;
  TraceInfo trace;
};

struct CheckOptions {
  Bounds bounds;
  /// Also check the hidden configurations inside internal bursts (debugging aid, not the semantics).
  bool check_internal = false;
  std::uint64_t seed = 0;
};

/// Checks every spec assertion at every visible configuration of `trace`, cells in parallel.
Verdict check_trace(const Program& p, const Trace& trace, const Spec& spec, const CheckOptions& opts);
/// Same cells evaluated one after another; the reference for the parallel version.
Verdict check_trace_serial(const Program& p, const Trace& trace, const Spec& spec,
                           const CheckOptions& opts);

Verdict check_run(const Program& p, const StmtList& driver, const Spec& spec, const CheckOptions& opts);
Verdict check_run_serial(const Program& p, const StmtList& driver, const Spec& spec,
                         const CheckOptions& opts);

/// Re-evaluates a witness instance with its bindings; a genuine witness gives false.
bool replay_witness(const Program& p, const Trace& trace, const Witness& w);

nlohmann::json verdict_to_json(const Verdict& v);
std::string verdict_to_text(const Verdict& v);

// ---------------------------------------------------------------------------
// Property harness

/// A context drawn at random: a program, a recorded run and a position in it.
struct Sample {
  std::string label;
  std::shared_ptr<const Program> program;
  std::shared_ptr<const Trace> trace;
  std::size_t position = 0;
  /// Names bound in the top frame that generated assertions may mention.
  std::vector<Identifier> variables;
  std::vector<Identifier> set_variables;
  std::vector<ClassId> classes;
  std::vector<Identifier> fields;
  std::vector<Identifier> ghosts;
  std::vector<Identifier> methods;
};

using Sampler = std::function<Sample(std::mt19937_64&)>;

struct EquivalenceReport {
  std::string name;
  std::size_t trials = 0;
  std::size_t discrepancies = 0;
  std::size_t withheld = 0;
  std::uint64_t seed = 0;
  /// The first context where the two sides disagree.
  std::optional<std::string> witness;
};

EquivalenceReport check_equivalence(const AssertionPtr& a, const AssertionPtr& b, const Sampler& sampler,
                                    std::size_t trials, std::uint64_t seed);

/// A law instantiates its assertion metavariables for the sampled context.
struct Law {
  std::string name;
  std::function<std::pair<AssertionPtr, AssertionPtr>(std::mt19937_64&, const Sample&)> instance;
};

EquivalenceReport check_law(const Law& law, const Sampler& sampler, std::size_t trials, std::uint64_t seed);

/// The thirteen classical equivalences; distributivity and De Morgan in their textbook form.
std::vector<Law> classical_laws();
/// Distributivity and De Morgan with mismatched metavariables; expected to fail.
std::vector<Law> mismatched_laws();

/// Exactly one of A and not A holds.
EquivalenceReport check_excluded_middle(const Sampler& sampler, std::size_t trials, std::uint64_t seed);
/// A and A -> A' give A'.
EquivalenceReport check_modus_ponens(const Sampler& sampler, std::size_t trials, std::uint64_t seed);

struct LinkingReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> notes;
};

/// Associativity, commutativity and overlap symmetry over random module triples.
LinkingReport check_linking_laws(std::size_t trials, std::uint64_t seed);
/// A step under M is the same step under link(M, M') for fresh M'.
LinkingReport check_step_preservation(std::size_t trials, std::uint64_t seed);

}  // namespace chainmail
