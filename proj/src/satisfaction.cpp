#include "chainmail/assertions.hpp"

#include <algorithm>
#include <functional>
#include <tuple>

#include "chainmail/ghost_eval.hpp"
#include "chainmail/overloaded.hpp"

namespace chainmail {

History push_history(History h, Config c) {
  return std::make_shared<const HistoryNode>(HistoryNode{std::move(c), std::move(h)});
}

History history_of(const Trace& t, std::size_t position) {
  History h;
  for (std::size_t i = 0; i < position && i < t.externals.size(); ++i) {
    h = push_history(std::move(h), t.externals[i].config);
  }
  return h;
}

EvalContext EvalContext::at(const Program& p, const Trace& t, std::size_t position,
                            Caveats* caveats) {
  EvalContext ctx;
  ctx.program = &p;
  ctx.config = t.externals.at(position).config;
  ctx.history = history_of(t, position);
  ctx.bounds = t.bounds;
  ctx.caveats = caveats;
  return ctx;
}

EvalContext EvalContext::with_config(Config c) const {
  EvalContext out = *this;
  out.config = std::move(c);
  return out;
}

namespace {

void note(const EvalContext& ctx, std::string text) {
  if (ctx.caveats) ctx.caveats->notes.insert(std::move(text));
}

EvalResult evaluate(const EvalContext& ctx, const Expr& e) {
  EvalResult r = eval_expr(ctx.program->linked, ctx.config, e, ctx.bounds.fuel);
  if (!r.is_defined() && r.reason() == UndefinedReason::FuelExhausted) {
    note(ctx, "ghost evaluation ran out of fuel (" + std::to_string(ctx.bounds.fuel) + ")");
  }
  return r;
}

std::optional<Address> evaluate_address(const EvalContext& ctx, const Expr& e) {
  EvalResult r = evaluate(ctx, e);
  if (!r.is_defined()) return std::nullopt;
  return as_address(r.value());
}

std::set<Identifier> frame_names(const Config& c) {
  std::set<Identifier> names = c.top().contn.variables();
  for (const auto& [name, _] : c.top().vars) names.insert(name);
  names.insert(kThis);
  return names;
}

/// Binds `var` to `v` in the top frame, renaming it apart from the frame when it clashes.
class Binder {
 public:
  Binder(const EvalContext& ctx, const Identifier& var, const AssertionPtr& body) {
    std::tie(name_, body_) = binder_for(ctx.config, var, body);
  }

  bool holds(const EvalContext& ctx, Value v) const {
    return sat(ctx.with_config(bind_top(ctx.config, name_, std::move(v))), *body_);
  }

 private:
  Identifier name_;
  AssertionPtr body_;
};

/// Calls `f` on every subset of the heap's domain until it returns `stop`.
bool any_subset(const EvalContext& ctx, const std::function<bool(const AddressSet&)>& f, bool stop) {
  std::vector<Address> dom = heap_objects(ctx.config, std::nullopt);
  if (dom.size() > ctx.bounds.set_cap) {
    throw BoundsExceeded("set quantifier over " + std::to_string(dom.size()) +
                         " objects exceeds the cap of " + std::to_string(ctx.bounds.set_cap));
  }
  const std::uint64_t count = std::uint64_t{1} << dom.size();
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    AddressSet s;
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (mask & (std::uint64_t{1} << i)) s.insert(dom[i]);
    }
    if (f(s) == stop) return true;
  }
  return false;
}

std::optional<Value> read_atom(const Config& c, const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Var: return interp_var(c, a.name);
    case Atom::Kind::Null: return Value{NullValue{}};
    case Atom::Kind::Nat: return Value{NatValue{a.nat}};
    case Atom::Kind::Bool: return Value{a.boolean};
  }
  return std::nullopt;
}

bool slot_matches(const EvalContext& ctx, const ExprPtr& pattern, const std::optional<Value>& actual) {
  if (!pattern) return true;
  if (!actual) return false;
  EvalResult r = evaluate(ctx, *pattern);
  return r.is_defined() && r.value() == *actual;
}

Config top_frame_only(const Config& c) {
  Config out;
  out.stack.push_back(c.top());
  out.heap = c.heap;
  out.next_address = c.next_address;
  return out;
}

/// Walks the frame-bounded future of the current configuration, one visible state at a time.
class FutureWalk {
 public:
  explicit FutureWalk(const EvalContext& ctx)
      : ctx_(ctx), current_(top_frame_only(ctx.config)), history_(push_history(ctx.history, ctx.config)) {}

  /// The next visible state adapted to the current bindings, or nothing once the frame ends.
  std::optional<EvalContext> next(const char* op) {
    if (done_) return std::nullopt;
    std::uint64_t budget = std::min<std::uint64_t>(ctx_.bounds.max_micro,
                                                   ctx_.bounds.max_steps - std::min(used_, ctx_.bounds.max_steps));
    ExternalStep s = external_step(*ctx_.program, current_, budget, false);
    used_ += s.micro_steps;
    if (!s.outcome.is_stepped()) {
      done_ = true;
      if (s.outcome.is_stuck() && s.outcome.reason == StuckReason::BudgetExhausted) {
        note(ctx_, std::string(op) + ": step budget exhausted while exploring the future");
      }
      return std::nullopt;
    }
    EvalContext out = ctx_;
    out.config = adapt(ctx_.config, *s.outcome.config);
    out.history = history_;
    history_ = push_history(history_, *s.outcome.config);
    current_ = std::move(*s.outcome.config);
    return out;
  }

 private:
  const EvalContext& ctx_;
  Config current_;
  History history_;
  std::uint64_t used_ = 0;
  bool done_ = false;
};

bool sat_next(const EvalContext& ctx, const Assertion& a) {
  FutureWalk walk(ctx);
  auto later = walk.next("next");
  return later && sat(*later, a);
}

bool sat_will(const EvalContext& ctx, const Assertion& a) {
  FutureWalk walk(ctx);
  while (auto later = walk.next("will")) {
    if (sat(*later, a)) return true;
  }
  return false;
}

bool sat_prev(const EvalContext& ctx, const Assertion& a) {
  if (!ctx.history) return false;
  EvalContext past = ctx;
  past.config = adapt(ctx.config, ctx.history->config);
  past.history = ctx.history->prev;
  return sat(past, a);
}

bool sat_was(const EvalContext& ctx, const Assertion& a) {
  for (History h = ctx.history; h; h = h->prev) {
    EvalContext past = ctx;
    past.config = adapt(ctx.config, h->config);
    past.history = h->prev;
    if (sat(past, a)) return true;
  }
  return false;
}

}  // namespace

std::pair<Identifier, AssertionPtr> binder_for(const Config& c, const Identifier& var,
                                               const AssertionPtr& body) {
  std::set<Identifier> names = frame_names(c);
  if (!names.count(var)) return {var, body};
  std::set<Identifier> inner = all_variables(*body);
  names.insert(inner.begin(), inner.end());
  Identifier fresh = fresh_name(var, names);
  return {fresh, rename_free(body, var, fresh)};
}

std::vector<Address> heap_objects(const Config& c, const std::optional<ClassId>& cls) {
  std::vector<Address> out;
  if (!c.heap) return out;
  for (const auto& [addr, obj] : *c.heap) {
    if (!cls || obj.class_id == *cls) out.push_back(addr);
  }
  return out;
}

bool sat_class(const EvalContext& ctx, const Expr& e, const ClassId& c) {
  auto a = evaluate_address(ctx, e);
  if (!a) return false;
  auto cls = class_of_address(ctx.config, *a);
  return cls && *cls == c;
}

bool sat_in_set(const EvalContext& ctx, const Expr& e, const Identifier& s) {
  auto set = interp_var(ctx.config, s);
  const auto* members = set ? std::get_if<AddressSet>(&*set) : nullptr;
  if (!members) return false;
  auto a = evaluate_address(ctx, e);
  return a && members->count(*a);
}

bool sat_access(const EvalContext& ctx, const Expr& x, const Expr& y) {
  auto holder = evaluate_address(ctx, x);
  auto target = evaluate_address(ctx, y);
  if (!holder || !target) return false;
  if (*holder == *target) return true;
  if (const ObjectRecord* obj = ctx.config.object(*holder)) {
    for (const auto& [_, v] : obj->fields) {
      if (v == Value{*target}) return true;
    }
  }
  auto self = interp_var(ctx.config, kThis);
  if (!self || *self != Value{*holder}) return false;
  for (const auto& z : ctx.config.top().contn.variables()) {
    auto v = interp_var(ctx.config, z);
    if (v && *v == Value{*target}) return true;
  }
  return false;
}

bool sat_calls(const EvalContext& ctx, const assertion::Calls& c) {
  const Stmt* head = ctx.config.top().contn.head();
  if (!head) return false;
  const auto* call = std::get_if<stmt::Call>(&head->node);
  if (!call || call->method != c.method || call->args.size() != c.args.size()) return false;
  if (!slot_matches(ctx, c.caller, interp_var(ctx.config, kThis))) return false;
  if (!slot_matches(ctx, c.receiver, interp_var(ctx.config, call->receiver))) return false;
  for (std::size_t i = 0; i < c.args.size(); ++i) {
    if (!slot_matches(ctx, c.args[i], read_atom(ctx.config, call->args[i]))) return false;
  }
  return true;
}

bool sat_viewpoint(const EvalContext& ctx, const Expr& x, bool want_external) {
  auto a = evaluate_address(ctx, x);
  if (!a) return false;
  auto cls = class_of_address(ctx.config, *a);
  if (!cls) return false;
  return ctx.program->is_internal_class(*cls) != want_external;
}

bool sat_space(const EvalContext& ctx, const Assertion& a, const Identifier& s) {
  auto set = interp_var(ctx.config, s);
  const auto* members = set ? std::get_if<AddressSet>(&*set) : nullptr;
  if (!members) return false;
  return sat(ctx.with_config(restrict(ctx.config, *members)), a);
}

Future future_of(const EvalContext& ctx, std::size_t max_states) {
  Future out;
  Caveats local;
  EvalContext probe = ctx;
  probe.caveats = &local;
  FutureWalk walk(probe);
  while (out.states.size() < max_states) {
    auto later = walk.next("future");
    if (!later) break;
    out.states.push_back(later->config);
  }
  out.exhausted = !local.notes.empty();
  if (out.exhausted) out.stop = *local.notes.begin();
  return out;
}

bool sat(const EvalContext& ctx, const Assertion& a) {
  using namespace assertion;
  return std::visit(
      overloaded{
          [&](const ExprHolds& x) { return evaluate(ctx, *x.e).is_true(); },
          [&](const Equals& x) {
            EvalResult l = evaluate(ctx, *x.lhs);
            if (!l.is_defined()) return false;
            EvalResult r = evaluate(ctx, *x.rhs);
            return r.is_defined() && l.value() == r.value();
          },
          [&](const HasClass& x) { return sat_class(ctx, *x.e, x.cls); },
          [&](const InSet& x) { return sat_in_set(ctx, *x.e, x.set); },
          [&](const Not& x) { return !sat(ctx, *x.a); },
          [&](const And& x) { return sat(ctx, *x.lhs) && sat(ctx, *x.rhs); },
          [&](const Or& x) { return sat(ctx, *x.lhs) || sat(ctx, *x.rhs); },
          [&](const Implies& x) { return !sat(ctx, *x.lhs) || sat(ctx, *x.rhs); },
          [&](const ForallObj& x) {
            Binder b(ctx, x.var, x.body);
            for (Address o : heap_objects(ctx.config, x.cls)) {
              if (!b.holds(ctx, o)) return false;
            }
            return true;
          },
          [&](const ExistsObj& x) {
            Binder b(ctx, x.var, x.body);
            for (Address o : heap_objects(ctx.config, x.cls)) {
              if (b.holds(ctx, o)) return true;
            }
            return false;
          },
          [&](const ForallSet& x) {
            Binder b(ctx, x.var, x.body);
            return !any_subset(ctx, [&](const AddressSet& s) { return b.holds(ctx, s); }, false);
          },
          [&](const ExistsSet& x) {
            Binder b(ctx, x.var, x.body);
            return any_subset(ctx, [&](const AddressSet& s) { return b.holds(ctx, s); }, true);
          },
          [&](const ExistsValue& x) {
            EvalResult v = evaluate(ctx, *x.value);
            if (!v.is_defined()) return false;
            return Binder(ctx, x.var, x.body).holds(ctx, v.value());
          },
          [&](const Access& x) { return sat_access(ctx, *x.holder, *x.target); },
          [&](const Calls& x) { return sat_calls(ctx, x); },
          [&](const Next& x) { return sat_next(ctx, *x.a); },
          [&](const Will& x) { return sat_will(ctx, *x.a); },
          [&](const Prev& x) { return sat_prev(ctx, *x.a); },
          [&](const Was& x) { return sat_was(ctx, *x.a); },
          [&](const Space& x) { return sat_space(ctx, *x.body, x.set); },
          [&](const External& x) { return sat_viewpoint(ctx, *x.e, true); },
          [&](const Internal& x) { return sat_viewpoint(ctx, *x.e, false); },
          [&](const Changes& x) { return sat(ctx, *desugar_changes(x.e)); },
      },
      a.node);
}

}  // namespace chainmail
