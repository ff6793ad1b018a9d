#include "chainmail/interpreter.hpp"

#include "chainmail/overloaded.hpp"

#include <algorithm>

namespace chainmail {

std::string_view to_string(StuckReason r) {
  switch (r) {
    case StuckReason::EncapsulationViolation: return "encapsulation-violation";
    case StuckReason::Unbound: return "unbound";
    case StuckReason::NoSuchMethod: return "no-such-method";
    case StuckReason::NoSuchField: return "no-such-field";
    case StuckReason::MarkerMismatch: return "marker-mismatch";
    case StuckReason::BadReceiver: return "bad-receiver";
    case StuckReason::ArityMismatch: return "arity-mismatch";
    case StuckReason::UnknownClass: return "unknown-class";
    case StuckReason::MissingReturn: return "missing-return";
    case StuckReason::BudgetExhausted: return "budget-exhausted";
  }
  return "unknown";
}

StepOutcome StepOutcome::stepped(Config c) {
  StepOutcome o;
  o.kind = Kind::Stepped;
  o.config = std::move(c);
  return o;
}

StepOutcome StepOutcome::terminated() { return StepOutcome{}; }

StepOutcome StepOutcome::stuck(StuckReason r, std::string detail) {
  StepOutcome o;
  o.kind = Kind::Stuck;
  o.reason = r;
  o.detail = std::move(detail);
  return o;
}

std::string StepOutcome::describe() const {
  switch (kind) {
    case Kind::Stepped: return "stepped";
    case Kind::Terminated: return "terminated";
    case Kind::Stuck:
      return std::string(to_string(reason)) + (detail.empty() ? "" : ": " + detail);
  }
  return "";
}

namespace {

struct Stuck {
  StuckReason reason;
  std::string detail;
};

Value read_atom(const Frame& f, const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Var: {
      auto it = f.vars.find(a.name);
      if (it == f.vars.end()) throw Stuck{StuckReason::Unbound, a.name};
      return it->second;
    }
    case Atom::Kind::Null: return NullValue{};
    case Atom::Kind::Nat: return NatValue{a.nat};
    case Atom::Kind::Bool: return a.boolean;
  }
  return NullValue{};
}

Value read_var(const Frame& f, const Identifier& x) { return read_atom(f, Atom::var(x)); }

/// Object denoted by variable x; Stuck if x is unbound or not a live address.
std::pair<Address, const ObjectRecord*> object_of(const Config& c, const Identifier& x) {
  Value v = read_var(c.top(), x);
  auto a = as_address(v);
  if (!a) throw Stuck{StuckReason::BadReceiver, x + " is " + to_string(v)};
  const ObjectRecord* obj = c.object(*a);
  if (!obj) throw Stuck{StuckReason::BadReceiver, x + " denotes unallocated " + to_string(v)};
  return {*a, obj};
}

/// Side condition of field access: ClassOf(x) = ClassOf(this).
void check_private(const Config& c, const Identifier& x, const ObjectRecord& target) {
  Value self = read_var(c.top(), kThis);
  auto a = as_address(self);
  const ObjectRecord* me = a ? c.object(*a) : nullptr;
  if (!me || me->class_id != target.class_id) {
    throw Stuck{StuckReason::EncapsulationViolation,
                "field of " + x + " (" + target.class_id + ") accessed from " +
                    (me ? me->class_id : std::string("<no class>"))};
  }
}

Config with_top(const Config& c, Frame top) {
  Config out;
  out.stack.reserve(c.stack.size());
  out.stack.assign(c.stack.begin(), c.stack.end() - 1);
  out.stack.push_back(std::move(top));
  out.heap = c.heap;
  out.next_address = c.next_address;
  return out;
}

std::optional<Value> primitive(const Value& receiver, const Identifier& method,
                               const std::vector<Value>& args) {
  auto nat_arg = [&](std::size_t i) -> std::uint64_t {
    if (args.size() != 1) throw Stuck{StuckReason::ArityMismatch, method};
    const auto* n = std::get_if<NatValue>(&args[i]);
    if (!n) throw Stuck{StuckReason::BadReceiver, method + " expects a number"};
    return n->n;
  };
  if (method == "same") {
    if (args.size() != 1) throw Stuck{StuckReason::ArityMismatch, method};
    return Value{receiver == args[0]};
  }
  if (const auto* n = std::get_if<NatValue>(&receiver)) {
    if (method == "plus") return NatValue{n->n + nat_arg(0)};
    if (method == "minus") {
      std::uint64_t k = nat_arg(0);
      return NatValue{n->n > k ? n->n - k : 0};
    }
    if (method == "geq") return n->n >= nat_arg(0);
    throw Stuck{StuckReason::NoSuchMethod, "number." + method};
  }
  if (const auto* b = std::get_if<bool>(&receiver)) {
    if (method == "pick") {
      if (args.size() != 2) throw Stuck{StuckReason::ArityMismatch, method};
      return *b ? args[0] : args[1];
    }
    throw Stuck{StuckReason::NoSuchMethod, "boolean." + method};
  }
  return std::nullopt;
}

Config exec(const ModuleDef& m, const Config& c, const Stmt& s) {
  const Frame& top = c.top();
  return std::visit(
      overloaded{
          [&](const stmt::FieldWrite& w) {
            auto [addr, obj] = object_of(c, w.target);
            check_private(c, w.target, *obj);
            const ClassDesc* cls = m.find(obj->class_id);
            if (!obj->fields.count(w.field) && !(cls && cls->has_field(w.field))) {
              throw Stuck{StuckReason::NoSuchField, obj->class_id + "." + w.field};
            }
            Value v = read_atom(top, w.value);
            auto heap = std::make_shared<Heap>(*c.heap);
            (*heap)[addr].fields[w.field] = std::move(v);
            Frame f = top;
            f.contn = top.contn.advanced();
            Config out = with_top(c, std::move(f));
            out.heap = std::move(heap);
            return out;
          },
          [&](const stmt::FieldRead& r) {
            auto [addr, obj] = object_of(c, r.source);
            check_private(c, r.source, *obj);
            auto it = obj->fields.find(r.field);
            if (it == obj->fields.end()) {
              throw Stuck{StuckReason::NoSuchField, obj->class_id + "." + r.field};
            }
            Frame f = top;
            f.vars[r.dest] = it->second;
            f.contn = top.contn.advanced();
            return with_top(c, std::move(f));
          },
          [&](const stmt::Call& call) {
            Value receiver = read_var(top, call.receiver);
            std::vector<Value> args;
            args.reserve(call.args.size());
            for (const auto& a : call.args) args.push_back(read_atom(top, a));
            if (auto result = primitive(receiver, call.method, args)) {
              Frame f = top;
              f.vars[call.dest] = std::move(*result);
              f.contn = top.contn.advanced();
              return with_top(c, std::move(f));
            }
            auto [addr, obj] = object_of(c, call.receiver);
            const MethodDecl* method = lookup_method(m, obj->class_id, call.method);
            if (!method) throw Stuck{StuckReason::NoSuchMethod, obj->class_id + "." + call.method};
            if (method->params.size() != args.size()) {
              throw Stuck{StuckReason::ArityMismatch, obj->class_id + "." + call.method};
            }
            Frame callee;
            callee.contn = Continuation::of(method->body);
            callee.vars[kThis] = addr;
            for (std::size_t i = 0; i < args.size(); ++i) callee.vars[method->params[i]] = args[i];
            Frame caller = top;
            caller.contn = top.contn.advanced();
            caller.contn.marker = call.dest;
            Config out = with_top(c, std::move(caller));
            out.stack.push_back(std::move(callee));
            return out;
          },
          [&](const stmt::New& n) {
            const ClassDesc* cls = m.find(n.class_id);
            if (!cls) throw Stuck{StuckReason::UnknownClass, n.class_id};
            if (n.args.size() > cls->fields.size()) {
              throw Stuck{StuckReason::ArityMismatch, "new " + n.class_id};
            }
            ObjectRecord obj{n.class_id, {}};
            for (std::size_t i = 0; i < cls->fields.size(); ++i) {
              obj.fields[cls->fields[i]] = i < n.args.size() ? read_atom(top, n.args[i]) : NullValue{};
            }
            Address fresh{c.next_address};
            auto heap = std::make_shared<Heap>(*c.heap);
            heap->emplace(fresh, std::move(obj));
            Frame f = top;
            f.vars[n.dest] = fresh;
            f.contn = top.contn.advanced();
            Config out = with_top(c, std::move(f));
            out.heap = std::move(heap);
            out.next_address = c.next_address + 1;
            return out;
          },
          [&](const stmt::Return& r) -> Config {
            Value v = read_atom(top, r.value);
            const Frame& below = c.stack[c.stack.size() - 2];
            if (!below.contn.marker) throw Stuck{StuckReason::MarkerMismatch, "caller is not waiting"};
            Frame f = below;
            f.vars[*below.contn.marker] = std::move(v);
            f.contn.marker.reset();
            Config out;
            out.stack.assign(c.stack.begin(), c.stack.end() - 2);
            out.stack.push_back(std::move(f));
            out.heap = c.heap;
            out.next_address = c.next_address;
            return out;
          },
      },
      s.node);
}

}  // namespace

StepOutcome step(const ModuleDef& m, const Config& c) {
  if (c.stack.empty()) return StepOutcome::stuck(StuckReason::MarkerMismatch, "empty stack");
  const Frame& top = c.top();
  if (top.contn.marker) {
    return StepOutcome::stuck(StuckReason::MarkerMismatch, "top frame is waiting for a result");
  }
  const Stmt* s = top.contn.head();
  if (!s) {
    if (c.stack.size() == 1) return StepOutcome::terminated();
    return StepOutcome::stuck(StuckReason::MissingReturn, "method body ended without return");
  }
  if (std::holds_alternative<stmt::Return>(s->node) && c.stack.size() == 1) {
    return StepOutcome::terminated();
  }
  try {
    return StepOutcome::stepped(exec(m, c, *s));
  } catch (const Stuck& stuck) {
    return StepOutcome::stuck(stuck.reason, stuck.detail);
  }
}

RunResult run(const ModuleDef& m, const Config& c, std::uint64_t max_steps) {
  RunResult result{c, StepOutcome::stepped(c), 0};
  while (true) {
    if (result.steps == max_steps) {
      if (max_steps != 0) result.outcome = StepOutcome::stuck(StuckReason::BudgetExhausted);
      return result;
    }
    StepOutcome o = step(m, result.config);
    if (!o.is_stepped()) {
      result.outcome = std::move(o);
      return result;
    }
    ++result.steps;
    result.config = *o.config;
    result.outcome = std::move(o);
  }
}

Program Program::make(ModuleDef internal, ModuleDef external) {
  Program p;
  p.linked = link(internal, external);
  p.internal = std::move(internal);
  p.external = std::move(external);
  return p;
}

bool Program::is_external(const Config& c) const {
  auto cls = class_of(c, kThis);
  return !(cls && internal.contains(*cls));
}

ExternalStep external_step(const Program& p, const Config& c, std::uint64_t max_micro,
                           bool keep_burst) {
  ExternalStep result;
  Config current = c;
  while (true) {
    if (result.micro_steps >= max_micro) {
      result.outcome = StepOutcome::stuck(StuckReason::BudgetExhausted,
                                          "internal burst exceeded " + std::to_string(max_micro));
      return result;
    }
    StepOutcome o = step(p.linked, current);
    if (!o.is_stepped()) {
      result.outcome = std::move(o);
      return result;
    }
    ++result.micro_steps;
    if (p.is_external(*o.config)) {
      result.outcome = std::move(o);
      return result;
    }
    current = *o.config;
    if (keep_burst) result.burst.push_back(current);
  }
}

ExternalStep external_step(const ModuleDef& internal, const ModuleDef& external, const Config& c,
                           std::uint64_t max_micro) {
  return external_step(Program::make(internal, external), c, max_micro);
}

Config initial(StmtList driver) {
  Frame f;
  f.contn = Continuation::of(std::move(driver));
  f.vars[kThis] = Address{0};
  Heap heap;
  heap.emplace(Address{0}, ObjectRecord{kObjectClass, {}});
  return make_config({std::move(f)}, std::move(heap));
}

Trace record_trace(const Program& p, const Config& start, const Bounds& bounds, bool keep_bursts) {
  Trace t;
  t.bounds = bounds;
  t.externals.push_back(TraceEntry{start, 0, {}});
  while (true) {
    if (t.total_steps >= bounds.max_steps) {
      t.truncated = true;
      t.stop = std::string(to_string(StuckReason::BudgetExhausted)) + ": step budget spent";
      return t;
    }
    std::uint64_t budget = std::min(bounds.max_micro, bounds.max_steps - t.total_steps);
    ExternalStep s = external_step(p, t.externals.back().config, budget, keep_bursts);
    t.total_steps += s.micro_steps;
    if (s.outcome.kind == StepOutcome::Kind::Terminated) {
      t.stop = "terminated";
      return t;
    }
    if (s.outcome.is_stuck()) {
      t.truncated = true;
      t.stop = s.outcome.describe();
      return t;
    }
    t.externals.push_back(TraceEntry{std::move(*s.outcome.config), s.micro_steps, std::move(s.burst)});
  }
}

Trace record_trace(const Program& p, const StmtList& driver, const Bounds& bounds,
                   bool keep_bursts) {
  return record_trace(p, initial(driver), bounds, keep_bursts);
}

}  // namespace chainmail
