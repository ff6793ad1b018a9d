#include <set>

#include "chainmail/frontend.hpp"
#include "lexer.hpp"

namespace chainmail {

namespace {

std::string location_prefix(const SourceSpan& span) {
  std::string where = span.file ? *span.file : "<input>";
  return where + ":" + std::to_string(span.line) + ":" + std::to_string(span.column) + ": ";
}

}  // namespace

ParseError::ParseError(const std::string& message, SourceSpan span)
    : ChainmailError(location_prefix(span) + message), span_(std::move(span)), bare_(message) {}

namespace {

using detail::Token;
using detail::TokenKind;

constexpr const char* kTransitiveHint =
    "the transitive access arrow '~>' has no defined meaning and is not supported; "
    "see docs/grammar.md (\"Unsupported notation\")";

bool later(const SourceSpan& a, const SourceSpan& b) {
  return a.line != b.line ? a.line > b.line : a.column > b.column;
}

class Parser {
 public:
  Parser(std::string_view text, const std::string& file)
      : file_(std::make_shared<const std::string>(file)),
        tokens_(detail::tokenize(text, file_)) {}

  // ---- modules ---------------------------------------------------------

  ModuleDef module() {
    ModuleDef m;
    while (!at_end()) {
      const Token& start = peek();
      ClassDesc cls = class_decl();
      if (m.contains(cls.name)) error("class '" + cls.name + "' is declared twice", start);
      m.add(std::move(cls));
    }
    return m;
  }

  StmtList stmts_to_end() {
    StmtList out = stmt_list([&] { return at_end(); });
    expect_end();
    return out;
  }

  ExprPtr expr_to_end() {
    ExprPtr e = expression();
    expect_end();
    return e;
  }

  AssertionPtr assertion_to_end() {
    reject_transitive_access();
    AssertionPtr a = assertion();
    expect_end();
    return alpha_normalize(a);
  }

  Spec spec() {
    reject_transitive_access();
    Spec s;
    expect_word("spec");
    s.name = name("spec name");
    std::set<std::string> seen;
    while (!at_end()) {
      expect_word("assert");
      const Token& at = peek();
      NamedAssertion entry;
      entry.name = name("assertion name");
      if (!seen.insert(entry.name).second) error("assertion '" + entry.name + "' is declared twice", at);
      expect_punct(":");
      entry.assertion = alpha_normalize(assertion());
      expect_punct(";");
      s.assertions.push_back(std::move(entry));
    }
    return s;
  }

 private:
  // ---- token plumbing ----------------------------------------------------

  const Token& peek(std::size_t k = 0) const {
    return tokens_[std::min(pos_ + k, tokens_.size() - 1)];
  }
  const Token& take() {
    const Token& t = tokens_[pos_];
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == TokenKind::End; }
  bool at_punct(const char* p, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Punct && peek(k).text == p;
  }
  bool at_word(const char* w, std::size_t k = 0) const {
    return peek(k).kind == TokenKind::Word && peek(k).text == w;
  }

  [[noreturn]] void error(const std::string& message, const Token& at) const {
    throw ParseError(message, at.span);
  }
  [[noreturn]] void unexpected(const std::string& wanted) const {
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    error("expected " + wanted + ", found " + found, t);
  }

  const Token& expect_punct(const char* p) {
    if (!at_punct(p)) unexpected(std::string("'") + p + "'");
    return take();
  }
  const Token& expect_word(const char* w) {
    if (!at_word(w)) unexpected(std::string("'") + w + "'");
    return take();
  }
  /// Closes a parenthesis; a missing ')' is reported at the '(' it would close.
  void close_paren(const Token& open) {
    if (at_punct(")")) {
      take();
      return;
    }
    const Token& t = peek();
    std::string found = t.kind == TokenKind::End ? "end of input" : "'" + t.text + "'";
    error("unclosed '(': expected ')' before " + found + " at " + std::to_string(t.span.line) + ":" +
              std::to_string(t.span.column),
          open);
  }
  void expect_end() {
    if (!at_end()) unexpected("end of input");
  }

  /// A variable or class name: any word that is not a keyword.
  Identifier ident(const std::string& what) {
    if (peek().kind != TokenKind::Word || detail::is_keyword(peek().text)) unexpected(what);
    return take().text;
  }
  /// A field, method, ghost or entry name: keywords allowed, the wildcard is not.
  Identifier name(const std::string& what) {
    if (peek().kind != TokenKind::Word || peek().text == "_") unexpected(what);
    return take().text;
  }

  SourceSpan span_from(const Token& start) const {
    SourceSpan s = start.span;
    const Token& last = tokens_[pos_ == 0 ? 0 : pos_ - 1];
    s.end_line = last.span.end_line;
    s.end_column = last.span.end_column;
    return s;
  }

  void reject_transitive_access() const {
    for (const auto& t : tokens_) {
      if (t.kind == TokenKind::Punct && t.text == "~>") throw ParseError(kTransitiveHint, t.span);
    }
  }

  // ---- classes -----------------------------------------------------------

  ClassDesc class_decl() {
    const Token& start = expect_word("class");
    ClassId cls = ident("class name");
    expect_punct("{");
    std::vector<Identifier> fields;
    std::vector<MethodDecl> methods;
    std::vector<GhostDecl> ghosts;
    while (!at_punct("}")) {
      if (at_word("field")) {
        take();
        fields.push_back(name("field name"));
      } else if (at_word("method")) {
        const Token& m = take();
        MethodDecl decl;
        decl.name = name("method name");
        decl.params = params();
        expect_punct("{");
        decl.body = std::make_shared<const StmtList>(stmt_list([&] { return at_punct("}"); }));
        expect_punct("}");
        decl.span = span_from(m);
        methods.push_back(std::move(decl));
      } else if (at_word("ghost")) {
        const Token& g = take();
        GhostDecl decl;
        decl.name = name("ghost name");
        decl.params = params();
        expect_punct("{");
        decl.body = expression();
        expect_punct("}");
        decl.span = span_from(g);
        ghosts.push_back(std::move(decl));
      } else {
        unexpected("'field', 'method', 'ghost' or '}'");
      }
    }
    expect_punct("}");
    return make_class(std::move(cls), std::move(fields), std::move(methods), std::move(ghosts),
                      span_from(start));
  }

  std::vector<Identifier> params() {
    std::vector<Identifier> out;
    expect_punct("(");
    if (!at_punct(")")) {
      out.push_back(ident("parameter name"));
      while (at_punct(",")) {
        take();
        out.push_back(ident("parameter name"));
      }
    }
    expect_punct(")");
    return out;
  }

  // ---- statements --------------------------------------------------------

  template <class Done>
  StmtList stmt_list(Done done) {
    StmtList out;
    while (!done()) {
      out.push_back(statement());
      if (!at_punct(";")) break;
      take();
    }
    if (!done()) unexpected("';' or the end of the statement list");
    return out;
  }

  Atom atom() {
    const Token& t = peek();
    if (t.kind == TokenKind::Nat) return Atom::natural(nat(take()));
    if (at_word("null")) return take(), Atom::null();
    if (at_word("true")) return take(), Atom::boolean_lit(true);
    if (at_word("false")) return take(), Atom::boolean_lit(false);
    return Atom::var(ident("a variable or literal"));
  }

  std::vector<Atom> atoms() {
    std::vector<Atom> out;
    expect_punct("(");
    if (!at_punct(")")) {
      out.push_back(atom());
      while (at_punct(",")) {
        take();
        out.push_back(atom());
      }
    }
    expect_punct(")");
    return out;
  }

  Stmt statement() {
    const Token& start = peek();
    if (at_word("if") || at_word("while")) {
      error("'" + start.text +
                "' is not a statement; conditionals are encoded with objects (for example "
                "b.pick(x, y)), see docs/grammar.md",
            start);
    }
    if (at_word("return")) {
      take();
      Atom v = atom();
      return Stmt{stmt::Return{std::move(v)}, span_from(start)};
    }
    Identifier x = ident("a statement");
    if (at_punct(".")) {
      take();
      Identifier f = name("field name");
      expect_punct(":=");
      Atom v = atom();
      return Stmt{stmt::FieldWrite{std::move(x), std::move(f), std::move(v)}, span_from(start)};
    }
    expect_punct(":=");
    if (at_word("new")) {
      take();
      ClassId c = ident("class name");
      auto args = atoms();
      return Stmt{stmt::New{std::move(x), std::move(c), std::move(args)}, span_from(start)};
    }
    Identifier y = ident("a receiver variable");
    if (!at_punct(".")) {
      error("plain assignment 'x := y' is not a statement; use a field read, call or new", peek());
    }
    take();
    Identifier f = name("field or method name");
    if (at_punct("(")) {
      auto args = atoms();
      return Stmt{stmt::Call{std::move(x), std::move(y), std::move(f), std::move(args)},
                  span_from(start)};
    }
    return Stmt{stmt::FieldRead{std::move(x), std::move(y), std::move(f)}, span_from(start)};
  }

  // ---- expressions -------------------------------------------------------

  std::uint64_t nat(const Token& t) const {
    try {
      std::size_t used = 0;
      unsigned long long v = std::stoull(t.text, &used);
      if (used == t.text.size()) return v;
    } catch (const std::exception&) {
    }
    error("number '" + t.text + "' is out of range", t);
  }

  ExprPtr expression() {
    const Token& start = peek();
    if (at_word("if")) {
      take();
      ExprPtr c = expression();
      expect_word("then");
      ExprPtr a = expression();
      expect_word("else");
      ExprPtr b = expression();
      return make_expr(expr::If{c, a, b}, span_from(start));
    }
    ExprPtr lhs = sum();
    if (at_punct("=")) {
      take();
      ExprPtr rhs = sum();
      return make_expr(expr::Eq{lhs, rhs}, span_from(start));
    }
    if (at_punct(">=")) {
      take();
      ExprPtr rhs = sum();
      return make_expr(expr::Geq{lhs, rhs}, span_from(start));
    }
    return lhs;
  }

  ExprPtr sum() {
    const Token& start = peek();
    ExprPtr e = postfix();
    while (at_punct("+")) {
      take();
      ExprPtr rhs = postfix();
      e = make_expr(expr::Plus{e, rhs}, span_from(start));
    }
    return e;
  }

  /// `.f` continues a path only when written without spaces around the dot.
  bool at_selector() const {
    return at_punct(".") && !peek().spaced && peek(1).kind == TokenKind::Word && !peek(1).spaced;
  }

  ExprPtr postfix() {
    const Token& start = peek();
    ExprPtr e = primary();
    while (at_selector()) {
      take();
      Identifier f = name("field or ghost name");
      if (at_punct("(")) {
        take();
        std::vector<ExprPtr> args;
        if (!at_punct(")")) {
          args.push_back(expression());
          while (at_punct(",")) {
            take();
            args.push_back(expression());
          }
        }
        expect_punct(")");
        e = make_expr(expr::GhostCall{e, std::move(f), std::move(args)}, span_from(start));
      } else {
        e = make_expr(expr::Field{e, std::move(f)}, span_from(start));
      }
    }
    return e;
  }

  ExprPtr primary() {
    const Token& start = peek();
    if (start.kind == TokenKind::Nat) {
      std::uint64_t v = nat(take());
      return make_expr(expr::NatLit{v}, span_from(start));
    }
    if (at_word("true") || at_word("false")) {
      bool v = take().text == "true";
      return make_expr(expr::BoolLit{v}, span_from(start));
    }
    if (at_word("null")) {
      take();
      return make_expr(expr::NullLit{}, span_from(start));
    }
    if (at_punct("(")) {
      const Token& open = take();
      ExprPtr e = expression();
      close_paren(open);
      return e;
    }
    Identifier x = ident("an expression");
    return make_expr(expr::Var{std::move(x)}, span_from(start));
  }

  // ---- assertions --------------------------------------------------------

  AssertionPtr assertion() {
    const Token& start = peek();
    AssertionPtr lhs = disjunction();
    if (at_punct("->")) {
      take();
      AssertionPtr rhs = assertion();
      return make_assertion(assertion::Implies{lhs, rhs}, span_from(start));
    }
    return lhs;
  }

  AssertionPtr disjunction() {
    const Token& start = peek();
    AssertionPtr a = conjunction();
    while (at_word("or")) {
      take();
      AssertionPtr rhs = conjunction();
      a = make_assertion(assertion::Or{a, rhs}, span_from(start));
    }
    return a;
  }

  AssertionPtr conjunction() {
    const Token& start = peek();
    AssertionPtr a = unary();
    while (at_word("and")) {
      take();
      AssertionPtr rhs = unary();
      a = make_assertion(assertion::And{a, rhs}, span_from(start));
    }
    return a;
  }

  AssertionPtr unary() {
    using namespace assertion;
    const Token& start = peek();
    if (at_word("not")) return take(), make_assertion(Not{unary()}, span_from(start));
    if (at_word("next")) return take(), make_assertion(Next{unary()}, span_from(start));
    if (at_word("will")) return take(), make_assertion(Will{unary()}, span_from(start));
    if (at_word("prev")) return take(), make_assertion(Prev{unary()}, span_from(start));
    if (at_word("was")) return take(), make_assertion(Was{unary()}, span_from(start));
    if (at_word("in")) {
      take();
      Identifier s = ident("a set variable");
      expect_punct(":");
      AssertionPtr body = unary();
      return make_assertion(Space{std::move(s), body}, span_from(start));
    }
    if (at_word("forall") || at_word("exists")) return quantifier();
    return atom_assertion();
  }

  AssertionPtr quantifier() {
    using namespace assertion;
    const Token& start = peek();
    bool universal = take().text == "forall";
    Identifier var = ident("a quantified variable");
    if (!universal && at_punct("=")) {
      take();
      ExprPtr value = expression();
      expect_punct(".");
      AssertionPtr body = assertion();
      return make_assertion(ExistsValue{std::move(var), value, body}, span_from(start));
    }
    std::optional<ClassId> cls;
    bool set = false;
    if (at_punct(":")) {
      take();
      if (at_word("SET")) {
        take();
        set = true;
      } else {
        cls = ident("a class name or SET");
      }
    }
    expect_punct(".");
    AssertionPtr body = assertion();
    SourceSpan span = span_from(start);
    if (set) {
      return universal ? make_assertion(ForallSet{std::move(var), body}, span)
                       : make_assertion(ExistsSet{std::move(var), body}, span);
    }
    return universal ? make_assertion(ForallObj{std::move(var), cls, body}, span)
                     : make_assertion(ExistsObj{std::move(var), cls, body}, span);
  }

  ExprPtr slot() {
    if (at_word("_")) {
      take();
      return nullptr;
    }
    return expression();
  }

  ExprPtr parenthesized_expr() {
    const Token& open = expect_punct("(");
    ExprPtr e = expression();
    close_paren(open);
    return e;
  }

  AssertionPtr atom_assertion() {
    using namespace assertion;
    const Token& start = peek();
    if (at_word("access")) {
      take();
      expect_punct("(");
      ExprPtr x = expression();
      expect_punct(",");
      ExprPtr y = expression();
      expect_punct(")");
      return make_assertion(Access{x, y}, span_from(start));
    }
    if (at_word("calls")) {
      take();
      expect_punct("(");
      Calls c;
      c.caller = slot();
      expect_punct(",");
      c.method = name("method name");
      expect_punct(",");
      c.receiver = slot();
      expect_punct(",");
      expect_punct("[");
      if (!at_punct("]")) {
        c.args.push_back(slot());
        while (at_punct(",")) {
          take();
          c.args.push_back(slot());
        }
      }
      expect_punct("]");
      expect_punct(")");
      return make_assertion(std::move(c), span_from(start));
    }
    if (at_word("external")) return take(), make_assertion(External{parenthesized_expr()}, span_from(start));
    if (at_word("internal")) return take(), make_assertion(Internal{parenthesized_expr()}, span_from(start));
    if (at_word("changes")) return take(), make_assertion(Changes{parenthesized_expr()}, span_from(start));
    if (at_punct("(")) {
      std::size_t saved = pos_;
      try {
        const Token& open = take();
        AssertionPtr inner = assertion();
        close_paren(open);
        if (!continues_expression()) return inner;
        pos_ = saved;
      } catch (const ParseError& first) {
        pos_ = saved;
        try {
          return expression_atom();
        } catch (const ParseError& second) {
          throw later(second.span(), first.span()) ? second : first;
        }
      }
    }
    return expression_atom();
  }

  bool continues_expression() const {
    return at_punct("=") || at_punct(">=") || at_punct("+") || at_punct(":") || at_word("in") ||
           at_selector();
  }

  AssertionPtr expression_atom() {
    using namespace assertion;
    const Token& start = peek();
    ExprPtr e = expression();
    if (at_punct(":")) {
      take();
      ClassId c = ident("a class name");
      return make_assertion(HasClass{e, std::move(c)}, span_from(start));
    }
    if (at_word("in")) {
      take();
      Identifier s = ident("a set variable");
      return make_assertion(InSet{e, std::move(s)}, span_from(start));
    }
    if (const auto* eq = std::get_if<expr::Eq>(&e->node)) {
      return make_assertion(Equals{eq->lhs, eq->rhs}, span_from(start));
    }
    return make_assertion(ExprHolds{e}, span_from(start));
  }

  std::shared_ptr<const std::string> file_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

ModuleDef parse_module(std::string_view text, const std::string& file) {
  return Parser(text, file).module();
}

Spec parse_spec(std::string_view text, const std::string& file) { return Parser(text, file).spec(); }

StmtList parse_stmts(std::string_view text, const std::string& file) {
  return Parser(text, file).stmts_to_end();
}

AssertionPtr parse_assertion(std::string_view text, const std::string& file) {
  return Parser(text, file).assertion_to_end();
}

ExprPtr parse_expr(std::string_view text, const std::string& file) {
  return Parser(text, file).expr_to_end();
}

}  // namespace chainmail
