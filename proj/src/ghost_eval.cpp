#include "chainmail/ghost_eval.hpp"

#include "chainmail/overloaded.hpp"

#include <vector>

namespace chainmail {

std::string_view to_string(UndefinedReason r) {
  switch (r) {
    case UndefinedReason::FuelExhausted: return "fuel-exhausted";
    case UndefinedReason::Unbound: return "unbound";
    case UndefinedReason::BadReceiver: return "bad-receiver";
    case UndefinedReason::NoSuchGhost: return "no-such-ghost";
    case UndefinedReason::StuckArith: return "stuck-arith";
    case UndefinedReason::NonBoolean: return "non-boolean";
  }
  return "unknown";
}

bool EvalResult::is_true() const {
  if (!value_) return false;
  const bool* b = std::get_if<bool>(&*value_);
  return b && *b;
}

namespace {

/// Variable scope: ghost parameters layered over the top frame of the configuration.
struct Scope {
  const Scope* parent = nullptr;
  const std::map<Identifier, Value>* frame = nullptr;
  std::vector<std::pair<Identifier, Value>> bindings;

  const Value* lookup(const Identifier& x) const {
    for (const Scope* s = this; s; s = s->parent) {
      for (auto it = s->bindings.rbegin(); it != s->bindings.rend(); ++it) {
        if (it->first == x) return &it->second;
      }
      if (s->frame) {
        auto f = s->frame->find(x);
        if (f != s->frame->end()) return &f->second;
      }
    }
    return nullptr;
  }
};

class Evaluator {
 public:
  Evaluator(const ModuleDef& m, const Config& c) : module_(m), config_(c) {}

  EvalResult eval(const Expr& e, const Scope& scope, std::uint32_t fuel) const {
    return std::visit(
        overloaded{
            [&](const expr::BoolLit& b) { return EvalResult::defined(b.value); },
            [&](const expr::NullLit&) { return EvalResult::defined(NullValue{}); },
            [&](const expr::NatLit& n) { return EvalResult::defined(NatValue{n.value}); },
            [&](const expr::Var& v) {
              const Value* found = scope.lookup(v.name);
              return found ? EvalResult::defined(*found) : EvalResult::undefined(UndefinedReason::Unbound);
            },
            [&](const expr::Eq& eq) {
              EvalResult l = eval(*eq.lhs, scope, fuel);
              if (!l.is_defined()) return l;
              EvalResult r = eval(*eq.rhs, scope, fuel);
              if (!r.is_defined()) return r;
              return EvalResult::defined(l.value() == r.value());
            },
            [&](const expr::Plus& p) {
              return arith(p.lhs, p.rhs, scope, fuel, [](std::uint64_t a, std::uint64_t b) {
                return Value{NatValue{a + b}};
              });
            },
            [&](const expr::Geq& g) {
              return arith(g.lhs, g.rhs, scope, fuel,
                           [](std::uint64_t a, std::uint64_t b) { return Value{a >= b}; });
            },
            [&](const expr::If& i) {
              EvalResult c = eval(*i.cond, scope, fuel);
              if (!c.is_defined()) return c;
              const bool* b = std::get_if<bool>(&c.value());
              if (!b) return EvalResult::undefined(UndefinedReason::NonBoolean);
              return eval(*b ? *i.then_branch : *i.else_branch, scope, fuel);
            },
            [&](const expr::Field& f) {
              EvalResult r = eval(*f.receiver, scope, fuel);
              if (!r.is_defined()) return r;
              auto addr = as_address(r.value());
              const ObjectRecord* obj = addr ? config_.object(*addr) : nullptr;
              if (!obj) return EvalResult::undefined(UndefinedReason::BadReceiver);
              auto it = obj->fields.find(f.name);
              if (it != obj->fields.end()) return EvalResult::defined(it->second);
              return ghost(*addr, *obj, f.name, {}, scope, fuel);
            },
            [&](const expr::GhostCall& g) {
              EvalResult r = eval(*g.receiver, scope, fuel);
              if (!r.is_defined()) return r;
              auto addr = as_address(r.value());
              const ObjectRecord* obj = addr ? config_.object(*addr) : nullptr;
              if (!obj) return EvalResult::undefined(UndefinedReason::BadReceiver);
              std::vector<Value> args;
              args.reserve(g.args.size());
              for (const auto& a : g.args) {
                EvalResult v = eval(*a, scope, fuel);
                if (!v.is_defined()) return v;
                args.push_back(v.value());
              }
              return ghost(*addr, *obj, g.name, std::move(args), scope, fuel);
            },
        },
        e.node);
  }

 private:
  template <class Op>
  EvalResult arith(const ExprPtr& lhs, const ExprPtr& rhs, const Scope& scope, std::uint32_t fuel,
                   Op op) const {
    EvalResult l = eval(*lhs, scope, fuel);
    if (!l.is_defined()) return l;
    EvalResult r = eval(*rhs, scope, fuel);
    if (!r.is_defined()) return r;
    const auto* a = std::get_if<NatValue>(&l.value());
    const auto* b = std::get_if<NatValue>(&r.value());
    if (!a || !b) return EvalResult::undefined(UndefinedReason::StuckArith);
    return EvalResult::defined(op(a->n, b->n));
  }

  EvalResult ghost(Address self, const ObjectRecord& obj, const Identifier& name,
                   std::vector<Value> args, const Scope& scope, std::uint32_t fuel) const {
    const GhostDecl* decl = lookup_ghost(module_, obj.class_id, name);
    if (!decl || decl->params.size() != args.size()) {
      return EvalResult::undefined(UndefinedReason::NoSuchGhost);
    }
    if (fuel == 0) return EvalResult::undefined(UndefinedReason::FuelExhausted);
    Scope inner;
    inner.parent = &scope;
    inner.bindings.reserve(args.size() + 1);
    inner.bindings.emplace_back(kThis, self);
    for (std::size_t i = 0; i < args.size(); ++i) {
      inner.bindings.emplace_back(decl->params[i], std::move(args[i]));
    }
    return eval(*decl->body, inner, fuel - 1);
  }

  const ModuleDef& module_;
  const Config& config_;
};

}  // namespace

EvalResult eval_expr(const ModuleDef& m, const Config& c, const Expr& e, std::uint32_t fuel) {
  Scope root;
  if (!c.stack.empty()) root.frame = &c.top().vars;
  return Evaluator(m, c).eval(e, root, fuel);
}

}  // namespace chainmail
