#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chainmail/ast.hpp"
#include "chainmail/runtime.hpp"

namespace chainmail {

inline constexpr const char* kObjectClass = "Object";

enum class StuckReason {
  EncapsulationViolation,
  Unbound,
  NoSuchMethod,
  NoSuchField,
  MarkerMismatch,
  BadReceiver,
  ArityMismatch,
  UnknownClass,
  MissingReturn,
  BudgetExhausted,
};

std::string_view to_string(StuckReason r);

struct StepOutcome {
  enum class Kind { Stepped, Terminated, Stuck };
  Kind kind = Kind::Terminated;
  std::optional<Config> config;
  StuckReason reason = StuckReason::BudgetExhausted;
  std::string detail;

  static StepOutcome stepped(Config c);
  static StepOutcome terminated();
  static StepOutcome stuck(StuckReason r, std::string detail = {});

  bool is_stepped() const { return kind == Kind::Stepped; }
  bool is_stuck() const { return kind == Kind::Stuck; }
  std::string describe() const;
};

/// One application of the operational rules under module `m`.
/// Nat and Boolean receivers answer a few primitive messages:
/// n.plus(k), n.minus(k) (truncated at zero), n.geq(k), b.pick(x, y), and on any value
/// y.same(z), the identity test.
StepOutcome step(const ModuleDef& m, const Config& c);

struct RunResult {
  Config config;
  StepOutcome outcome;
  std::uint64_t steps = 0;
};

/// Repeated steps; max_steps == 0 returns the input unchanged (outcome Stepped).
RunResult run(const ModuleDef& m, const Config& c, std::uint64_t max_steps);

/// The internal module, the external module and their link.
struct Program {
  ModuleDef internal;
  ModuleDef external;
  ModuleDef linked;

  static Program make(ModuleDef internal, ModuleDef external);

  bool is_internal_class(const ClassId& c) const { return internal.contains(c); }
  /// A configuration is external unless `this` denotes an object of an internal class.
  bool is_external(const Config& c) const;
};

struct ExternalStep {
  StepOutcome outcome;
  std::vector<Config> burst;
  std::uint64_t micro_steps = 0;
};

/// Runs from `c` through the hidden internal configurations up to the next external one.
ExternalStep external_step(const Program& p, const Config& c, std::uint64_t max_micro,
                           bool keep_burst = true);
ExternalStep external_step(const ModuleDef& internal, const ModuleDef& external, const Config& c,
                           std::uint64_t max_micro);

/// One frame running `driver` with `this` bound to a fresh Object at address 0.
Config initial(StmtList driver);

struct TraceEntry {
  Config config;
  std::uint64_t micro_steps = 0;
  std::vector<Config> burst;
};

struct Trace {
  std::vector<TraceEntry> externals;
  Bounds bounds;
  bool truncated = false;
  std::string stop;
  std::uint64_t total_steps = 0;
};

Trace record_trace(const Program& p, const Config& start, const Bounds& bounds,
                   bool keep_bursts = true);
Trace record_trace(const Program& p, const StmtList& driver, const Bounds& bounds,
                   bool keep_bursts = true);

}  // namespace chainmail
