#include "chainmail/ast.hpp"

#include "chainmail/overloaded.hpp"

#include <set>
#include <sstream>

namespace chainmail {

std::string SourceSpan::to_string() const {
  std::ostringstream out;
  out << (file && !file->empty() ? *file : std::string("<input>")) << ':' << line << ':' << column;
  return out.str();
}

WellFormednessError::WellFormednessError(const std::string& message, SourceSpan span)
    : ChainmailError(span.line > 0 ? span.to_string() + ": " + message : message),
      span_(std::move(span)) {}

namespace {
std::string join_ids(const std::vector<ClassId>& ids) {
  std::string out;
  for (const auto& id : ids) {
    if (!out.empty()) out += ", ";
    out += id;
  }
  return out;
}
}  // namespace

OverlapError::OverlapError(std::vector<ClassId> classes)
    : ChainmailError("modules overlap on classes: " + join_ids(classes)),
      classes_(std::move(classes)) {}

ExprPtr make_expr(Expr::Node node, SourceSpan span) {
  return std::make_shared<const Expr>(Expr{std::move(node), std::move(span)});
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  return same_expr(*a, *b);
}

namespace {
bool same_args(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same_expr(a[i], b[i])) return false;
  }
  return true;
}
}  // namespace

bool same_expr(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      overloaded{
          [&](const expr::BoolLit& x) { return x.value == std::get<expr::BoolLit>(b.node).value; },
          [&](const expr::NullLit&) { return true; },
          [&](const expr::NatLit& x) { return x.value == std::get<expr::NatLit>(b.node).value; },
          [&](const expr::Var& x) { return x.name == std::get<expr::Var>(b.node).name; },
          [&](const expr::Eq& x) {
            const auto& y = std::get<expr::Eq>(b.node);
            return same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
          },
          [&](const expr::Plus& x) {
            const auto& y = std::get<expr::Plus>(b.node);
            return same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
          },
          [&](const expr::Geq& x) {
            const auto& y = std::get<expr::Geq>(b.node);
            return same_expr(x.lhs, y.lhs) && same_expr(x.rhs, y.rhs);
          },
          [&](const expr::If& x) {
            const auto& y = std::get<expr::If>(b.node);
            return same_expr(x.cond, y.cond) && same_expr(x.then_branch, y.then_branch) &&
                   same_expr(x.else_branch, y.else_branch);
          },
          [&](const expr::Field& x) {
            const auto& y = std::get<expr::Field>(b.node);
            return x.name == y.name && same_expr(x.receiver, y.receiver);
          },
          [&](const expr::GhostCall& x) {
            const auto& y = std::get<expr::GhostCall>(b.node);
            return x.name == y.name && same_expr(x.receiver, y.receiver) && same_args(x.args, y.args);
          },
      },
      a.node);
}

std::vector<Identifier> stmt_variables(const Stmt& s) {
  std::vector<Identifier> out;
  auto atom = [&](const Atom& a) {
    if (a.is_var()) out.push_back(a.name);
  };
  std::visit(overloaded{
                 [&](const stmt::FieldWrite& w) {
                   out.push_back(w.target);
                   atom(w.value);
                 },
                 [&](const stmt::FieldRead& r) {
                   out.push_back(r.dest);
                   out.push_back(r.source);
                 },
                 [&](const stmt::Call& c) {
                   out.push_back(c.dest);
                   out.push_back(c.receiver);
                   for (const auto& a : c.args) atom(a);
                 },
                 [&](const stmt::New& n) {
                   out.push_back(n.dest);
                   for (const auto& a : n.args) atom(a);
                 },
                 [&](const stmt::Return& r) { atom(r.value); },
             },
             s.node);
  return out;
}

Stmt rename_stmt(const Stmt& s, const std::map<Identifier, Identifier>& renaming) {
  auto id = [&](const Identifier& x) {
    auto it = renaming.find(x);
    return it == renaming.end() ? x : it->second;
  };
  auto atom = [&](const Atom& a) {
    if (!a.is_var()) return a;
    return Atom::var(id(a.name));
  };
  auto atoms = [&](const std::vector<Atom>& in) {
    std::vector<Atom> out;
    out.reserve(in.size());
    for (const auto& a : in) out.push_back(atom(a));
    return out;
  };
  Stmt out{s.node, s.span};
  std::visit(overloaded{
                 [&](const stmt::FieldWrite& w) {
                   out.node = stmt::FieldWrite{id(w.target), w.field, atom(w.value)};
                 },
                 [&](const stmt::FieldRead& r) {
                   out.node = stmt::FieldRead{id(r.dest), id(r.source), r.field};
                 },
                 [&](const stmt::Call& c) {
                   out.node = stmt::Call{id(c.dest), id(c.receiver), c.method, atoms(c.args)};
                 },
                 [&](const stmt::New& n) { out.node = stmt::New{id(n.dest), n.class_id, atoms(n.args)}; },
                 [&](const stmt::Return& r) { out.node = stmt::Return{atom(r.value)}; },
             },
             s.node);
  return out;
}

bool ClassDesc::has_field(const Identifier& f) const {
  for (const auto& x : fields) {
    if (x == f) return true;
  }
  return false;
}

namespace {
void check_params(const std::string& what, const Identifier& owner,
                  const std::vector<Identifier>& params, const SourceSpan& span) {
  std::set<Identifier> seen;
  for (const auto& p : params) {
    if (p == kThis) {
      throw WellFormednessError(what + " '" + owner + "' may not take 'this' as a parameter", span);
    }
    if (!seen.insert(p).second) {
      throw WellFormednessError(what + " '" + owner + "' repeats parameter '" + p + "'", span);
    }
  }
}
}  // namespace

ClassDesc make_class(ClassId name, std::vector<Identifier> fields, std::vector<MethodDecl> methods,
                     std::vector<GhostDecl> ghosts, SourceSpan span) {
  ClassDesc cls;
  cls.name = std::move(name);
  cls.span = span;
  std::set<Identifier> field_names;
  for (auto& f : fields) {
    if (!field_names.insert(f).second) {
      throw WellFormednessError("class '" + cls.name + "' declares field '" + f + "' twice", span);
    }
  }
  cls.fields = std::move(fields);
  for (auto& m : methods) {
    check_params("method", m.name, m.params, m.span);
    if (m.name == "same") {
      throw WellFormednessError("'same' is the built-in identity test and cannot be declared as a method",
                                m.span);
    }
    if (cls.methods.count(m.name)) {
      throw WellFormednessError("class '" + cls.name + "' declares method '" + m.name + "' twice",
                                m.span);
    }
    if (!m.body) m.body = std::make_shared<const StmtList>();
    cls.methods.emplace(m.name, std::move(m));
  }
  for (auto& g : ghosts) {
    check_params("ghost", g.name, g.params, g.span);
    if (cls.ghosts.count(g.name)) {
      throw WellFormednessError("class '" + cls.name + "' declares ghost '" + g.name + "' twice",
                                g.span);
    }
    if (field_names.count(g.name)) {
      throw WellFormednessError(
          "class '" + cls.name + "' uses '" + g.name + "' as both a field and a ghost", g.span);
    }
    cls.ghosts.emplace(g.name, std::move(g));
  }
  return cls;
}

const ClassDesc* ModuleDef::find(const ClassId& c) const {
  auto it = classes.find(c);
  return it == classes.end() ? nullptr : it->second.get();
}

void ModuleDef::add(ClassDesc cls) {
  ClassId id = cls.name;
  if (classes.count(id)) throw OverlapError({id});
  classes.emplace(id, std::make_shared<const ClassDesc>(std::move(cls)));
}

bool same_class(const ClassDesc& a, const ClassDesc& b) {
  if (a.name != b.name || a.fields != b.fields) return false;
  if (a.methods.size() != b.methods.size() || a.ghosts.size() != b.ghosts.size()) return false;
  for (const auto& [name, m] : a.methods) {
    auto it = b.methods.find(name);
    if (it == b.methods.end()) return false;
    const auto& n = it->second;
    if (m.params != n.params || *m.body != *n.body) return false;
  }
  for (const auto& [name, g] : a.ghosts) {
    auto it = b.ghosts.find(name);
    if (it == b.ghosts.end()) return false;
    if (g.params != it->second.params || !same_expr(g.body, it->second.body)) return false;
  }
  return true;
}

bool same_module(const ModuleDef& a, const ModuleDef& b) {
  if (a.classes.size() != b.classes.size()) return false;
  for (const auto& [id, cls] : a.classes) {
    const ClassDesc* other = b.find(id);
    if (!other || !same_class(*cls, *other)) return false;
  }
  return true;
}

const MethodDecl* lookup_method(const ModuleDef& m, const ClassId& c, const Identifier& name) {
  const ClassDesc* cls = m.find(c);
  if (!cls) return nullptr;
  auto it = cls->methods.find(name);
  return it == cls->methods.end() ? nullptr : &it->second;
}

const GhostDecl* lookup_ghost(const ModuleDef& m, const ClassId& c, const Identifier& name) {
  const ClassDesc* cls = m.find(c);
  if (!cls) return nullptr;
  auto it = cls->ghosts.find(name);
  return it == cls->ghosts.end() ? nullptr : &it->second;
}

ModuleDef link(const ModuleDef& a, const ModuleDef& b) {
  std::vector<ClassId> overlap;
  for (const auto& [id, _] : a.classes) {
    if (b.contains(id)) overlap.push_back(id);
  }
  if (!overlap.empty()) throw OverlapError(std::move(overlap));
  ModuleDef out = a;
  for (const auto& entry : b.classes) out.classes.insert(entry);
  return out;
}

}  // namespace chainmail
