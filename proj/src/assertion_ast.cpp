#include "chainmail/assertions.hpp"

#include "chainmail/overloaded.hpp"

namespace chainmail {

AssertionPtr make_assertion(Assertion::Node node, SourceSpan span) {
  return std::make_shared<const Assertion>(Assertion{std::move(node), std::move(span)});
}

namespace {

bool same_opt_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return same_expr(*a, *b);
}

}  // namespace

bool same_assertion(const AssertionPtr& a, const AssertionPtr& b) {
  if (!a || !b) return !a && !b;
  return same_assertion(*a, *b);
}

bool same_assertion(const Assertion& a, const Assertion& b) {
  if (a.node.index() != b.node.index()) return false;
  using namespace assertion;
  return std::visit(
      overloaded{
          [&](const ExprHolds& x) { return same_expr(x.e, std::get<ExprHolds>(b.node).e); },
          [&](const Equals& x) {
            const auto& y = std::get<Equals>(b.node);
            return same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
          },
          [&](const HasClass& x) {
            const auto& y = std::get<HasClass>(b.node);
            return x.cls == y.cls && same_expr(x.e, y.e);
          },
          [&](const InSet& x) {
            const auto& y = std::get<InSet>(b.node);
            return x.set == y.set && same_expr(x.e, y.e);
          },
          [&](const Not& x) { return same_assertion(x.a, std::get<Not>(b.node).a); },
          [&](const And& x) {
            const auto& y = std::get<And>(b.node);
            return same_assertion(x.lhs, y.lhs) && same_assertion(x.rhs, y.rhs);
          },
          [&](const Or& x) {
            const auto& y = std::get<Or>(b.node);
            return same_assertion(x.lhs, y.lhs) && same_assertion(x.rhs, y.rhs);
          },
          [&](const Implies& x) {
            const auto& y = std::get<Implies>(b.node);
            return same_assertion(x.lhs, y.lhs) && same_assertion(x.rhs, y.rhs);
          },
          [&](const ForallObj& x) {
            const auto& y = std::get<ForallObj>(b.node);
            return x.var == y.var && x.cls == y.cls && same_assertion(x.body, y.body);
          },
          [&](const ExistsObj& x) {
            const auto& y = std::get<ExistsObj>(b.node);
            return x.var == y.var && x.cls == y.cls && same_assertion(x.body, y.body);
          },
          [&](const ForallSet& x) {
            const auto& y = std::get<ForallSet>(b.node);
            return x.var == y.var && same_assertion(x.body, y.body);
          },
          [&](const ExistsSet& x) {
            const auto& y = std::get<ExistsSet>(b.node);
            return x.var == y.var && same_assertion(x.body, y.body);
          },
          [&](const ExistsValue& x) {
            const auto& y = std::get<ExistsValue>(b.node);
            return x.var == y.var && same_expr(x.value, y.value) && same_assertion(x.body, y.body);
          },
          [&](const Access& x) {
            const auto& y = std::get<Access>(b.node);
            return same_expr(x.holder, y.holder) && same_expr(x.target, y.target);
          },
          [&](const Calls& x) {
            const auto& y = std::get<Calls>(b.node);
            if (x.method != y.method || x.args.size() != y.args.size()) return false;
            if (!same_opt_expr(x.caller, y.caller) || !same_opt_expr(x.receiver, y.receiver)) {
              return false;
            }
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (!same_opt_expr(x.args[i], y.args[i])) return false;
            }
            return true;
          },
          [&](const Next& x) { return same_assertion(x.a, std::get<Next>(b.node).a); },
          [&](const Will& x) { return same_assertion(x.a, std::get<Will>(b.node).a); },
          [&](const Prev& x) { return same_assertion(x.a, std::get<Prev>(b.node).a); },
          [&](const Was& x) { return same_assertion(x.a, std::get<Was>(b.node).a); },
          [&](const Space& x) {
            const auto& y = std::get<Space>(b.node);
            return x.set == y.set && same_assertion(x.body, y.body);
          },
          [&](const External& x) { return same_expr(x.e, std::get<External>(b.node).e); },
          [&](const Internal& x) { return same_expr(x.e, std::get<Internal>(b.node).e); },
          [&](const Changes& x) { return same_expr(x.e, std::get<Changes>(b.node).e); },
      },
      a.node);
}

namespace {

void expr_vars(const Expr& e, std::set<Identifier>& out) {
  std::visit(overloaded{
                 [](const expr::BoolLit&) {},
                 [](const expr::NullLit&) {},
                 [](const expr::NatLit&) {},
                 [&](const expr::Var& v) { out.insert(v.name); },
                 [&](const expr::Eq& x) {
                   expr_vars(*x.lhs, out);
                   expr_vars(*x.rhs, out);
                 },
                 [&](const expr::Plus& x) {
                   expr_vars(*x.lhs, out);
                   expr_vars(*x.rhs, out);
                 },
                 [&](const expr::Geq& x) {
                   expr_vars(*x.lhs, out);
                   expr_vars(*x.rhs, out);
                 },
                 [&](const expr::If& x) {
                   expr_vars(*x.cond, out);
                   expr_vars(*x.then_branch, out);
                   expr_vars(*x.else_branch, out);
                 },
                 [&](const expr::Field& x) { expr_vars(*x.receiver, out); },
                 [&](const expr::GhostCall& x) {
                   expr_vars(*x.receiver, out);
                   for (const auto& a : x.args) expr_vars(*a, out);
                 },
             },
             e.node);
}

void opt_expr_vars(const ExprPtr& e, std::set<Identifier>& out) {
  if (e) expr_vars(*e, out);
}

/// Free variables; with `all` set, binder names are collected too.
void assertion_vars(const Assertion& a, std::set<Identifier>& out, bool all) {
  using namespace assertion;
  auto binder = [&](const Identifier& var, const Assertion& body) {
    std::set<Identifier> inner;
    assertion_vars(body, inner, all);
    if (!all) inner.erase(var);
    else inner.insert(var);
    out.insert(inner.begin(), inner.end());
  };
  std::visit(overloaded{
                 [&](const ExprHolds& x) { expr_vars(*x.e, out); },
                 [&](const Equals& x) {
                   expr_vars(*x.lhs, out);
                   expr_vars(*x.rhs, out);
                 },
                 [&](const HasClass& x) { expr_vars(*x.e, out); },
                 [&](const InSet& x) {
                   expr_vars(*x.e, out);
                   out.insert(x.set);
                 },
                 [&](const Not& x) { assertion_vars(*x.a, out, all); },
                 [&](const And& x) {
                   assertion_vars(*x.lhs, out, all);
                   assertion_vars(*x.rhs, out, all);
                 },
                 [&](const Or& x) {
                   assertion_vars(*x.lhs, out, all);
                   assertion_vars(*x.rhs, out, all);
                 },
                 [&](const Implies& x) {
                   assertion_vars(*x.lhs, out, all);
                   assertion_vars(*x.rhs, out, all);
                 },
                 [&](const ForallObj& x) { binder(x.var, *x.body); },
                 [&](const ExistsObj& x) { binder(x.var, *x.body); },
                 [&](const ForallSet& x) { binder(x.var, *x.body); },
                 [&](const ExistsSet& x) { binder(x.var, *x.body); },
                 [&](const ExistsValue& x) {
                   expr_vars(*x.value, out);
                   binder(x.var, *x.body);
                 },
                 [&](const Access& x) {
                   expr_vars(*x.holder, out);
                   expr_vars(*x.target, out);
                 },
                 [&](const Calls& x) {
                   opt_expr_vars(x.caller, out);
                   opt_expr_vars(x.receiver, out);
                   for (const auto& e : x.args) opt_expr_vars(e, out);
                 },
                 [&](const Next& x) { assertion_vars(*x.a, out, all); },
                 [&](const Will& x) { assertion_vars(*x.a, out, all); },
                 [&](const Prev& x) { assertion_vars(*x.a, out, all); },
                 [&](const Was& x) { assertion_vars(*x.a, out, all); },
                 [&](const Space& x) {
                   out.insert(x.set);
                   assertion_vars(*x.body, out, all);
                 },
                 [&](const External& x) { expr_vars(*x.e, out); },
                 [&](const Internal& x) { expr_vars(*x.e, out); },
                 [&](const Changes& x) { expr_vars(*x.e, out); },
             },
             a.node);
}

ExprPtr rename_opt(const ExprPtr& e, const Identifier& from, const Identifier& to) {
  return e ? rename_free(e, from, to) : nullptr;
}

}  // namespace

std::set<Identifier> free_variables(const Expr& e) {
  std::set<Identifier> out;
  expr_vars(e, out);
  return out;
}

std::set<Identifier> free_variables(const Assertion& a) {
  std::set<Identifier> out;
  assertion_vars(a, out, false);
  return out;
}

std::set<Identifier> all_variables(const Assertion& a) {
  std::set<Identifier> out;
  assertion_vars(a, out, true);
  return out;
}

ExprPtr rename_free(const ExprPtr& e, const Identifier& from, const Identifier& to) {
  auto r = [&](const ExprPtr& x) { return rename_free(x, from, to); };
  Expr::Node node = std::visit(
      overloaded{
          [&](const expr::Var& v) -> Expr::Node { return expr::Var{v.name == from ? to : v.name}; },
          [&](const expr::Eq& x) -> Expr::Node { return expr::Eq{r(x.lhs), r(x.rhs)}; },
          [&](const expr::Plus& x) -> Expr::Node { return expr::Plus{r(x.lhs), r(x.rhs)}; },
          [&](const expr::Geq& x) -> Expr::Node { return expr::Geq{r(x.lhs), r(x.rhs)}; },
          [&](const expr::If& x) -> Expr::Node {
            return expr::If{r(x.cond), r(x.then_branch), r(x.else_branch)};
          },
          [&](const expr::Field& x) -> Expr::Node { return expr::Field{r(x.receiver), x.name}; },
          [&](const expr::GhostCall& x) -> Expr::Node {
            std::vector<ExprPtr> args;
            for (const auto& a : x.args) args.push_back(r(a));
            return expr::GhostCall{r(x.receiver), x.name, std::move(args)};
          },
          [&](const auto& lit) -> Expr::Node { return lit; },
      },
      e->node);
  return make_expr(std::move(node), e->span);
}

AssertionPtr rename_free(const AssertionPtr& a, const Identifier& from, const Identifier& to) {
  using namespace assertion;
  auto r = [&](const AssertionPtr& x) { return rename_free(x, from, to); };
  auto re = [&](const ExprPtr& x) { return rename_free(x, from, to); };
  auto set = [&](const Identifier& s) { return s == from ? to : s; };
  auto under = [&](const Identifier& var, const AssertionPtr& body) {
    return var == from ? body : r(body);
  };
  Assertion::Node node = std::visit(
      overloaded{
          [&](const ExprHolds& x) -> Assertion::Node { return ExprHolds{re(x.e)}; },
          [&](const Equals& x) -> Assertion::Node { return Equals{re(x.lhs), re(x.rhs)}; },
          [&](const HasClass& x) -> Assertion::Node { return HasClass{re(x.e), x.cls}; },
          [&](const InSet& x) -> Assertion::Node { return InSet{re(x.e), set(x.set)}; },
          [&](const Not& x) -> Assertion::Node { return Not{r(x.a)}; },
          [&](const And& x) -> Assertion::Node { return And{r(x.lhs), r(x.rhs)}; },
          [&](const Or& x) -> Assertion::Node { return Or{r(x.lhs), r(x.rhs)}; },
          [&](const Implies& x) -> Assertion::Node { return Implies{r(x.lhs), r(x.rhs)}; },
          [&](const ForallObj& x) -> Assertion::Node {
            return ForallObj{x.var, x.cls, under(x.var, x.body)};
          },
          [&](const ExistsObj& x) -> Assertion::Node {
            return ExistsObj{x.var, x.cls, under(x.var, x.body)};
          },
          [&](const ForallSet& x) -> Assertion::Node { return ForallSet{x.var, under(x.var, x.body)}; },
          [&](const ExistsSet& x) -> Assertion::Node { return ExistsSet{x.var, under(x.var, x.body)}; },
          [&](const ExistsValue& x) -> Assertion::Node {
            return ExistsValue{x.var, re(x.value), under(x.var, x.body)};
          },
          [&](const Access& x) -> Assertion::Node { return Access{re(x.holder), re(x.target)}; },
          [&](const Calls& x) -> Assertion::Node {
            std::vector<ExprPtr> args;
            for (const auto& e : x.args) args.push_back(rename_opt(e, from, to));
            return Calls{rename_opt(x.caller, from, to), x.method, rename_opt(x.receiver, from, to),
                         std::move(args)};
          },
          [&](const Next& x) -> Assertion::Node { return Next{r(x.a)}; },
          [&](const Will& x) -> Assertion::Node { return Will{r(x.a)}; },
          [&](const Prev& x) -> Assertion::Node { return Prev{r(x.a)}; },
          [&](const Was& x) -> Assertion::Node { return Was{r(x.a)}; },
          [&](const Space& x) -> Assertion::Node { return Space{set(x.set), r(x.body)}; },
          [&](const External& x) -> Assertion::Node { return External{re(x.e)}; },
          [&](const Internal& x) -> Assertion::Node { return Internal{re(x.e)}; },
          [&](const Changes& x) -> Assertion::Node { return Changes{re(x.e)}; },
      },
      a->node);
  return make_assertion(std::move(node), a->span);
}

namespace {

class AlphaNormalizer {
 public:
  explicit AlphaNormalizer(std::set<Identifier> taken) : taken_(std::move(taken)) {}

  AssertionPtr run(const AssertionPtr& a, const std::set<Identifier>& scope) {
    using namespace assertion;
    auto r = [&](const AssertionPtr& x) { return run(x, scope); };
    Assertion::Node node = std::visit(
        overloaded{
            [&](const Not& x) -> Assertion::Node { return Not{r(x.a)}; },
            [&](const And& x) -> Assertion::Node { return And{r(x.lhs), r(x.rhs)}; },
            [&](const Or& x) -> Assertion::Node { return Or{r(x.lhs), r(x.rhs)}; },
            [&](const Implies& x) -> Assertion::Node { return Implies{r(x.lhs), r(x.rhs)}; },
            [&](const ForallObj& x) -> Assertion::Node {
              auto [v, body] = bind(x.var, x.body, scope);
              return ForallObj{v, x.cls, body};
            },
            [&](const ExistsObj& x) -> Assertion::Node {
              auto [v, body] = bind(x.var, x.body, scope);
              return ExistsObj{v, x.cls, body};
            },
            [&](const ForallSet& x) -> Assertion::Node {
              auto [v, body] = bind(x.var, x.body, scope);
              return ForallSet{v, body};
            },
            [&](const ExistsSet& x) -> Assertion::Node {
              auto [v, body] = bind(x.var, x.body, scope);
              return ExistsSet{v, body};
            },
            [&](const ExistsValue& x) -> Assertion::Node {
              auto [v, body] = bind(x.var, x.body, scope);
              return ExistsValue{v, x.value, body};
            },
            [&](const Next& x) -> Assertion::Node { return Next{r(x.a)}; },
            [&](const Will& x) -> Assertion::Node { return Will{r(x.a)}; },
            [&](const Prev& x) -> Assertion::Node { return Prev{r(x.a)}; },
            [&](const Was& x) -> Assertion::Node { return Was{r(x.a)}; },
            [&](const Space& x) -> Assertion::Node { return Space{x.set, r(x.body)}; },
            [&](const auto& atom) -> Assertion::Node { return atom; },
        },
        a->node);
    return make_assertion(std::move(node), a->span);
  }

 private:
  std::pair<Identifier, AssertionPtr> bind(const Identifier& var, const AssertionPtr& body,
                                           const std::set<Identifier>& scope) {
    Identifier name = var;
    AssertionPtr renamed = body;
    if (scope.count(var)) {
      name = fresh_name(var, taken_);
      taken_.insert(name);
      renamed = rename_free(body, var, name);
    }
    std::set<Identifier> inner = scope;
    inner.insert(name);
    return {name, run(renamed, inner)};
  }

  std::set<Identifier> taken_;
};

}  // namespace

AssertionPtr alpha_normalize(const AssertionPtr& a) {
  std::set<Identifier> taken = all_variables(*a);
  taken.insert(kThis);
  return AlphaNormalizer(std::move(taken)).run(a, free_variables(*a));
}

AssertionPtr desugar_changes(const ExprPtr& e) {
  using namespace assertion;
  std::set<Identifier> taken = free_variables(*e);
  Identifier v = fresh_name("v", taken);
  auto var = make_expr(expr::Var{v}, e->span);
  auto differs =
      make_assertion(Not{make_assertion(Equals{e, var}, e->span)}, e->span);
  return make_assertion(ExistsValue{v, e, make_assertion(Next{differs}, e->span)}, e->span);
}

}  // namespace chainmail
