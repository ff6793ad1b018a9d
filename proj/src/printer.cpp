#include "chainmail/frontend.hpp"
#include "chainmail/overloaded.hpp"

namespace chainmail {

namespace {

// Expression levels: 0 if, 1 comparison, 2 sum, 3 path, 4 primary.
int expr_level(const Expr& e) {
  return std::visit(overloaded{
                        [](const expr::If&) { return 0; },
                        [](const expr::Eq&) { return 1; },
                        [](const expr::Geq&) { return 1; },
                        [](const expr::Plus&) { return 2; },
                        [](const expr::Field&) { return 3; },
                        [](const expr::GhostCall&) { return 3; },
                        [](const auto&) { return 4; },
                    },
                    e.node);
}

std::string expr_at(const Expr& e, int level);

std::string expr_body(const Expr& e) {
  return std::visit(
      overloaded{
          [](const expr::BoolLit& b) -> std::string { return b.value ? "true" : "false"; },
          [](const expr::NullLit&) -> std::string { return "null"; },
          [](const expr::NatLit& n) { return std::to_string(n.value); },
          [](const expr::Var& v) { return v.name; },
          [](const expr::Eq& x) { return expr_at(*x.lhs, 2) + " = " + expr_at(*x.rhs, 2); },
          [](const expr::Geq& x) { return expr_at(*x.lhs, 2) + " >= " + expr_at(*x.rhs, 2); },
          [](const expr::Plus& x) { return expr_at(*x.lhs, 2) + " + " + expr_at(*x.rhs, 3); },
          [](const expr::If& x) {
            return "if " + expr_at(*x.cond, 0) + " then " + expr_at(*x.then_branch, 0) + " else " +
                   expr_at(*x.else_branch, 0);
          },
          [](const expr::Field& x) { return expr_at(*x.receiver, 3) + "." + x.name; },
          [](const expr::GhostCall& x) {
            std::string out = expr_at(*x.receiver, 3) + "." + x.name + "(";
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (i) out += ", ";
              out += expr_at(*x.args[i], 0);
            }
            return out + ")";
          },
      },
      e.node);
}

std::string expr_at(const Expr& e, int level) {
  std::string body = expr_body(e);
  return expr_level(e) < level ? "(" + body + ")" : body;
}

std::string atom(const Atom& a) {
  switch (a.kind) {
    case Atom::Kind::Var: return a.name;
    case Atom::Kind::Null: return "null";
    case Atom::Kind::Nat: return std::to_string(a.nat);
    case Atom::Kind::Bool: return a.boolean ? "true" : "false";
  }
  return "null";
}

std::string atoms(const std::vector<Atom>& args) {
  std::string out = "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += atom(args[i]);
  }
  return out + ")";
}

// Assertion levels: 0 quantifier, 1 implication, 2 or, 3 and, 4 prefix operator, 5 atom.
int assertion_level(const Assertion& a) {
  using namespace assertion;
  return std::visit(overloaded{
                        [](const ForallObj&) { return 0; },
                        [](const ExistsObj&) { return 0; },
                        [](const ForallSet&) { return 0; },
                        [](const ExistsSet&) { return 0; },
                        [](const ExistsValue&) { return 0; },
                        [](const Implies&) { return 1; },
                        [](const Or&) { return 2; },
                        [](const And&) { return 3; },
                        [](const Not&) { return 4; },
                        [](const Next&) { return 4; },
                        [](const Will&) { return 4; },
                        [](const Prev&) { return 4; },
                        [](const Was&) { return 4; },
                        [](const Space&) { return 4; },
                        [](const auto&) { return 5; },
                    },
                    a.node);
}

std::string assertion_at(const Assertion& a, int level);

std::string slot(const ExprPtr& e) { return e ? expr_at(*e, 0) : "_"; }

std::string object_binder(const char* q, const Identifier& var, const std::optional<ClassId>& cls,
                          const Assertion& body) {
  return std::string(q) + " " + var + (cls ? ":" + *cls : "") + ". " + assertion_at(body, 0);
}

std::string assertion_body(const Assertion& a) {
  using namespace assertion;
  return std::visit(
      overloaded{
          [](const ExprHolds& x) {
            // An equality would read back as Equals; the parenthesized form documents that.
            return std::holds_alternative<expr::Eq>(x.e->node) ? "(" + expr_at(*x.e, 0) + ")"
                                                                : expr_at(*x.e, 0);
          },
          [](const Equals& x) { return expr_at(*x.lhs, 2) + " = " + expr_at(*x.rhs, 2); },
          [](const HasClass& x) { return expr_at(*x.e, 1) + " : " + x.cls; },
          [](const InSet& x) { return expr_at(*x.e, 1) + " in " + x.set; },
          [](const Not& x) { return "not " + assertion_at(*x.a, 4); },
          [](const And& x) { return assertion_at(*x.lhs, 3) + " and " + assertion_at(*x.rhs, 4); },
          [](const Or& x) { return assertion_at(*x.lhs, 2) + " or " + assertion_at(*x.rhs, 3); },
          [](const Implies& x) { return assertion_at(*x.lhs, 2) + " -> " + assertion_at(*x.rhs, 1); },
          [](const ForallObj& x) { return object_binder("forall", x.var, x.cls, *x.body); },
          [](const ExistsObj& x) { return object_binder("exists", x.var, x.cls, *x.body); },
          [](const ForallSet& x) { return "forall " + x.var + ":SET. " + assertion_at(*x.body, 0); },
          [](const ExistsSet& x) { return "exists " + x.var + ":SET. " + assertion_at(*x.body, 0); },
          [](const ExistsValue& x) {
            return "exists " + x.var + " = " + expr_at(*x.value, 0) + ". " + assertion_at(*x.body, 0);
          },
          [](const Access& x) {
            return "access(" + expr_at(*x.holder, 0) + ", " + expr_at(*x.target, 0) + ")";
          },
          [](const Calls& x) {
            std::string out = "calls(" + slot(x.caller) + ", " + x.method + ", " + slot(x.receiver) + ", [";
            for (std::size_t i = 0; i < x.args.size(); ++i) {
              if (i) out += ", ";
              out += slot(x.args[i]);
            }
            return out + "])";
          },
          [](const Next& x) { return "next " + assertion_at(*x.a, 4); },
          [](const Will& x) { return "will " + assertion_at(*x.a, 4); },
          [](const Prev& x) { return "prev " + assertion_at(*x.a, 4); },
          [](const Was& x) { return "was " + assertion_at(*x.a, 4); },
          [](const Space& x) { return "in " + x.set + ": " + assertion_at(*x.body, 4); },
          [](const External& x) { return "external(" + expr_at(*x.e, 0) + ")"; },
          [](const Internal& x) { return "internal(" + expr_at(*x.e, 0) + ")"; },
          [](const Changes& x) { return "changes(" + expr_at(*x.e, 0) + ")"; },
      },
      a.node);
}

std::string assertion_at(const Assertion& a, int level) {
  std::string body = assertion_body(a);
  return assertion_level(a) < level ? "(" + body + ")" : body;
}

std::string params(const std::vector<Identifier>& ps) {
  std::string out = "(";
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) out += ", ";
    out += ps[i];
  }
  return out + ")";
}

}  // namespace

std::string print_expr(const Expr& e) { return expr_at(e, 0); }

std::string print_stmt(const Stmt& s) {
  return std::visit(overloaded{
                        [](const stmt::FieldWrite& x) { return x.target + "." + x.field + " := " + atom(x.value); },
                        [](const stmt::FieldRead& x) { return x.dest + " := " + x.source + "." + x.field; },
                        [](const stmt::Call& x) {
                          return x.dest + " := " + x.receiver + "." + x.method + atoms(x.args);
                        },
                        [](const stmt::New& x) { return x.dest + " := new " + x.class_id + atoms(x.args); },
                        [](const stmt::Return& x) { return "return " + atom(x.value); },
                    },
                    s.node);
}

std::string print_stmts(const StmtList& stmts) {
  std::string out;
  for (std::size_t i = 0; i < stmts.size(); ++i) {
    if (i) out += "; ";
    out += print_stmt(stmts[i]);
  }
  return out;
}

std::string print_assertion(const Assertion& a) { return assertion_at(a, 0); }

std::string print_module(const ModuleDef& m) {
  std::string out;
  for (const auto& [id, cls] : m.classes) {
    if (!out.empty()) out += "\n";
    out += "class " + id + " {\n";
    for (const auto& f : cls->fields) out += "  field " + f + "\n";
    for (const auto& [name, meth] : cls->methods) {
      out += "  method " + name + params(meth.params) + " {\n";
      for (std::size_t i = 0; i < meth.body->size(); ++i) {
        out += "    " + print_stmt((*meth.body)[i]) + (i + 1 < meth.body->size() ? ";\n" : "\n");
      }
      out += "  }\n";
    }
    for (const auto& [name, g] : cls->ghosts) {
      out += "  ghost " + name + params(g.params) + " { " + print_expr(*g.body) + " }\n";
    }
    out += "}\n";
  }
  return out;
}

std::string print_spec(const Spec& s) {
  std::string out = "spec " + s.name + "\n";
  for (const auto& entry : s.assertions) {
    out += "\nassert " + entry.name + " :\n  " + print_assertion(*entry.assertion) + ";\n";
  }
  return out;
}

}  // namespace chainmail
