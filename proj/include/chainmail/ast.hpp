#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace chainmail {

using Identifier = std::string;
using ClassId = std::string;

inline constexpr const char* kThis = "this";

/// Half-open source range; line and column are 1-based. Empty file means synthetic.
struct SourceSpan {
  std::shared_ptr<const std::string> file;
  int line = 0;
  int column = 0;
  int end_line = 0;
  int end_column = 0;

  std::string to_string() const;
};

class ChainmailError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class WellFormednessError : public ChainmailError {
 public:
  WellFormednessError(const std::string& message, SourceSpan span);
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

class OverlapError : public ChainmailError {
 public:
  explicit OverlapError(std::vector<ClassId> classes);
  const std::vector<ClassId>& classes() const { return classes_; }

 private:
  std::vector<ClassId> classes_;
};

// ---------------------------------------------------------------------------
// Expressions (pure; used by ghost bodies and assertions)

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

namespace expr {
struct BoolLit {
  bool value = false;
};
struct NullLit {};
struct NatLit {
  std::uint64_t value = 0;
};
struct Var {
  Identifier name;
};
struct Eq {
  ExprPtr lhs, rhs;
};
struct Plus {
  ExprPtr lhs, rhs;
};
struct Geq {
  ExprPtr lhs, rhs;
};
struct If {
  ExprPtr cond, then_branch, else_branch;
};
/// `e.f`: a physical field if the object has one, else a zero-argument ghost.
struct Field {
  ExprPtr receiver;
  Identifier name;
};
/// `e.f(args)`: always a ghost call.
struct GhostCall {
  ExprPtr receiver;
  Identifier name;
  std::vector<ExprPtr> args;
};
}  // namespace expr

struct Expr {
  using Node = std::variant<expr::BoolLit, expr::NullLit, expr::NatLit, expr::Var, expr::Eq,
                            expr::Plus, expr::Geq, expr::If, expr::Field, expr::GhostCall>;
  Node node;
  SourceSpan span;
};

ExprPtr make_expr(Expr::Node node, SourceSpan span = {});

/// Structural equality; spans are ignored.
bool same_expr(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

// ---------------------------------------------------------------------------
// Statements

/// Operand of a statement: a variable, or a literal (null, nat, bool).
struct Atom {
  enum class Kind { Var, Null, Nat, Bool };
  Kind kind = Kind::Null;
  Identifier name;
  std::uint64_t nat = 0;
  bool boolean = false;

  static Atom var(Identifier n) { return Atom{Kind::Var, std::move(n), 0, false}; }
  static Atom null() { return Atom{}; }
  static Atom natural(std::uint64_t v) { return Atom{Kind::Nat, {}, v, false}; }
  static Atom boolean_lit(bool b) { return Atom{Kind::Bool, {}, 0, b}; }
  bool is_var() const { return kind == Kind::Var; }
  bool operator==(const Atom&) const = default;
};

namespace stmt {
/// x.f := y
struct FieldWrite {
  Identifier target;
  Identifier field;
  Atom value;
  bool operator==(const FieldWrite&) const = default;
};
/// x := y.f
struct FieldRead {
  Identifier dest;
  Identifier source;
  Identifier field;
  bool operator==(const FieldRead&) const = default;
};
/// x := y.m(args)
struct Call {
  Identifier dest;
  Identifier receiver;
  Identifier method;
  std::vector<Atom> args;
  bool operator==(const Call&) const = default;
};
/// x := new C(args)
struct New {
  Identifier dest;
  ClassId class_id;
  std::vector<Atom> args;
  bool operator==(const New&) const = default;
};
/// return x
struct Return {
  Atom value;
  bool operator==(const Return&) const = default;
};
}  // namespace stmt

struct Stmt {
  using Node = std::variant<stmt::FieldWrite, stmt::FieldRead, stmt::Call, stmt::New, stmt::Return>;
  Node node;
  SourceSpan span;

  bool operator==(const Stmt& other) const { return node == other.node; }
};

using StmtList = std::vector<Stmt>;
using StmtListPtr = std::shared_ptr<const StmtList>;

/// Variables read or written by a statement, in order of appearance.
std::vector<Identifier> stmt_variables(const Stmt& s);

/// Applies a variable renaming to a statement; names absent from the map are kept.
Stmt rename_stmt(const Stmt& s, const std::map<Identifier, Identifier>& renaming);

// ---------------------------------------------------------------------------
// Declarations

struct MethodDecl {
  Identifier name;
  std::vector<Identifier> params;
  StmtListPtr body;
  SourceSpan span;
};

struct GhostDecl {
  Identifier name;
  std::vector<Identifier> params;
  ExprPtr body;
  SourceSpan span;
};

struct ClassDesc {
  ClassId name;
  std::vector<Identifier> fields;
  std::map<Identifier, MethodDecl> methods;
  std::map<Identifier, GhostDecl> ghosts;
  SourceSpan span;

  bool has_field(const Identifier& f) const;
};

/// Builds a class, rejecting duplicate names, field/ghost clashes and bad parameter lists.
ClassDesc make_class(ClassId name, std::vector<Identifier> fields, std::vector<MethodDecl> methods,
                     std::vector<GhostDecl> ghosts, SourceSpan span = {});

struct ModuleDef {
  std::map<ClassId, std::shared_ptr<const ClassDesc>> classes;

  bool contains(const ClassId& c) const { return classes.count(c) != 0; }
  const ClassDesc* find(const ClassId& c) const;
  void add(ClassDesc cls);
};

bool same_class(const ClassDesc& a, const ClassDesc& b);
bool same_module(const ModuleDef& a, const ModuleDef& b);

const MethodDecl* lookup_method(const ModuleDef& m, const ClassId& c, const Identifier& name);
const GhostDecl* lookup_ghost(const ModuleDef& m, const ClassId& c, const Identifier& name);

/// Union of the class maps; throws OverlapError naming every shared class.
ModuleDef link(const ModuleDef& a, const ModuleDef& b);

}  // namespace chainmail
