#include <doctest.h>

#include "chainmail/ast.hpp"
#include "chainmail/frontend.hpp"
#include "support.hpp"

using namespace chainmail;

TEST_SUITE("ast") {
  TEST_CASE("lookup_method finds declared methods only") {
    ModuleDef ba1 = test_support::module_file("bank/ba1.loo");
    const MethodDecl* deposit = lookup_method(ba1, "Account", "deposit");
    REQUIRE(deposit != nullptr);
    CHECK(deposit->params == std::vector<Identifier>{"src", "amt"});
    CHECK(!deposit->body->empty());
    CHECK(lookup_method(ba1, "Account", "frobnicate") == nullptr);
    CHECK(lookup_method(ba1, "Missing", "deposit") == nullptr);
  }

  TEST_CASE("lookup_ghost separates ghosts from fields") {
    ModuleDef m = parse_module(R"(
      class Node {
        field next
        ghost acyclic() { if this.next = null then true else this.next.acyclic }
      })");
    const GhostDecl* g = lookup_ghost(m, "Node", "acyclic");
    REQUIRE(g != nullptr);
    CHECK(print_expr(*g->body) == "if this.next = null then true else this.next.acyclic");
    CHECK(lookup_ghost(m, "Node", "next") == nullptr);
    CHECK(lookup_ghost(m, "Missing", "last") == nullptr);
  }

  TEST_CASE("link unions disjoint modules") {
    ModuleDef a = parse_module("class A { field x }");
    ModuleDef b = parse_module("class B { field y }");
    ModuleDef ab = link(a, b);
    CHECK(ab.classes.size() == 2);
    CHECK(ab.contains("A"));
    CHECK(ab.contains("B"));
    CHECK(same_module(ab, link(b, a)));
  }

  TEST_CASE("link rejects overlapping modules and names every shared class") {
    ModuleDef a = parse_module("class A { field x } class C { }");
    ModuleDef b = parse_module("class A { field x } class B { } class C { }");
    try {
      link(a, b);
      FAIL("expected an overlap");
    } catch (const OverlapError& e) {
      CHECK(e.classes() == std::vector<ClassId>{"A", "C"});
    }
    CHECK_THROWS_AS(link(b, a), OverlapError);
  }

  TEST_CASE("link is associative on three disjoint modules") {
    ModuleDef a = parse_module("class A { field x }");
    ModuleDef b = parse_module("class B { method m() { return null } }");
    ModuleDef c = parse_module("class C { ghost g() { 1 } }");
    CHECK(same_module(link(link(a, b), c), link(a, link(b, c))));
  }

  TEST_CASE("lookup through a link agrees with the defining module") {
    ModuleDef ba1 = test_support::module_file("bank/ba1.loo");
    ModuleDef linked = link(ba1, test_support::module_file("bank/clients.loo"));
    CHECK(lookup_method(linked, "Account", "deposit") == lookup_method(ba1, "Account", "deposit"));
  }

  TEST_CASE("well-formedness") {
    CHECK_THROWS_AS(parse_module("class A { field f ghost f() { 1 } }"), WellFormednessError);
    CHECK_THROWS_AS(parse_module("class A { field f field f }"), WellFormednessError);
    CHECK_THROWS_AS(parse_module("class A { method m(x, x) { return x } }"), WellFormednessError);
    CHECK_THROWS_AS(parse_module("class A { method m(this) { return null } }"), WellFormednessError);
    CHECK_THROWS_AS(parse_module("class A { ghost g() { 1 } ghost g(x) { x } }"), WellFormednessError);
    CHECK_THROWS_AS(parse_module("class A { method same(x) { return x } }"), WellFormednessError);
    CHECK_NOTHROW(parse_module("class A { field f ghost g() { this.f } }"));
  }

  TEST_CASE("statement renaming and variables") {
    StmtList s = parse_stmts("x := y.m(z, 3, null)");
    CHECK(stmt_variables(s[0]) == std::vector<Identifier>{"x", "y", "z"});
    Stmt r = rename_stmt(s[0], {{"y", "w"}});
    CHECK(print_stmt(r) == "x := w.m(z, 3, null)");
  }
}
