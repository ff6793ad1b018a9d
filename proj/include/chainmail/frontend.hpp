#pragma once

#include <string>
#include <string_view>

#include "chainmail/assertions.hpp"
#include "chainmail/ast.hpp"

namespace chainmail {

class ParseError : public ChainmailError {
 public:
  ParseError(const std::string& message, SourceSpan span);
  const SourceSpan& span() const { return span_; }
  /// The message without the location prefix.
  const std::string& bare() const { return bare_; }

 private:
  SourceSpan span_;
  std::string bare_;
};

/// `class C { field f  method m(x) { s; s }  ghost g(x) { e } }`, any number of classes.
ModuleDef parse_module(std::string_view text, const std::string& file = "<module>");

/// `spec NAME` followed by `assert name : A ;` entries.
Spec parse_spec(std::string_view text, const std::string& file = "<spec>");

/// A `;`-separated statement list, as used for drivers.
StmtList parse_stmts(std::string_view text, const std::string& file = "<driver>");

/// A single assertion; nested binders that shadow are renamed apart.
AssertionPtr parse_assertion(std::string_view text, const std::string& file = "<assertion>");

ExprPtr parse_expr(std::string_view text, const std::string& file = "<expr>");

std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s);
std::string print_stmts(const StmtList& stmts);
std::string print_assertion(const Assertion& a);
std::string print_module(const ModuleDef& m);
std::string print_spec(const Spec& s);

}  // namespace chainmail
