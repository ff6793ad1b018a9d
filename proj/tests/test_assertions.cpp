#include <doctest.h>

#include "chainmail/assertions.hpp"
#include "chainmail/frontend.hpp"
#include "chainmail/sampling.hpp"
#include "support.hpp"

using namespace chainmail;

namespace {

bool at_node(const std::string& text, Caveats* cav = nullptr) {
  Sample s = node_sample();
  return sat(EvalContext::at(*s.program, *s.trace, s.position, cav), *parse_assertion(text));
}

}  // namespace

TEST_SUITE("assertions") {
  TEST_CASE("partial ghosts: equality fails, negation holds") {
    Caveats cav;
    CHECK(!at_node("cyc.last = cyc.last", &cav));
    CHECK(at_node("not (cyc.last = cyc.last)"));
    CHECK(!cav.notes.empty());
    CHECK(!at_node("cyc.acyclic = false"));
    CHECK(at_node("not cyc.acyclic"));
    CHECK(at_node("acyc.acyclic"));
    CHECK(!at_node("not acyc.acyclic"));
  }

  TEST_CASE("object quantifiers and classes") {
    CHECK(at_node("forall x:Node. x.next = null or x.next = x"));
    CHECK(at_node("exists x:Node. x.next = null"));
    CHECK(!at_node("forall x. x : Node"));
    CHECK(at_node("acyc : Node and not (acyc : Object)"));
  }

  TEST_CASE("exists value binds the current value") {
    CHECK(at_node("exists v = acyc.next. v = null"));
    CHECK(!at_node("exists v = cyc.last. true"));
  }

  TEST_CASE("judgments on the bank fixtures") {
    Program ba1 = test_support::program("bank/ba1.loo", "bank/clients.loo");
    Program ba2 = test_support::program("bank/ba2.loo", "bank/clients.loo");
    using test_support::judge;
    CHECK(judge(ba1, "bank/sigma1.json", "a2.myBank = a3.myBank"));
    CHECK(judge(ba2, "bank/sigma2.json", "a2.myBank = a3.myBank"));
    CHECK(judge(ba1, "bank/sigma1.json", "a2.myBank : Bank"));
    CHECK(judge(ba1, "bank/sigma1.json", "access(a2, b1)"));
    CHECK(!judge(ba1, "bank/sigma1.json", "access(a3, a2)"));
    CHECK(!judge(ba2, "bank/sigma2.json", "access(a2, a3)"));
    CHECK(judge(ba2, "bank/sigma2.json", "external(u92)"));
    CHECK(!judge(ba2, "bank/sigma2.json", "external(a2)"));
    CHECK(!judge(ba2, "bank/sigma2.json", "external(b1.ledger)"));
    CHECK(judge(ba1, "bank/sigma1.json", "in S1: exists o. access(o, a4)"));
    CHECK(!judge(ba1, "bank/sigma1.json", "in S2: exists o. access(o, a4)"));
    CHECK(judge(ba2, "bank/sigma2.json", "exists n = a2.balance. n = 60"));
    CHECK(!judge(ba2, "bank/sigma2.json", "in S4: exists n = a2.balance. true"));
    CHECK(judge(ba1, "bank/sigma3.json", "calls(x, deposit, a2, [a3, 360])"));
    CHECK(!judge(ba1, "bank/sigma3.json", "calls(x, deposit, a3, [a2, 360])"));
    CHECK(judge(ba1, "bank/sigma3.json", "calls(_, deposit, _, [_, 360])"));
    CHECK(judge(ba2, "bank/sigma4.json", "will (a2.balance = 420)"));
    CHECK(judge(ba2, "bank/sigma4.json", "a2.balance = 60 and a3.balance >= 360 and a4.balance >= 360"));
    CHECK(judge(ba1, "bank/sigma5.json", "in S1: will changes(a2.balance)"));
    CHECK(!judge(ba1, "bank/sigma5.json", "in S2: will changes(a2.balance)"));
    CHECK(judge(ba1, "bank/sigma5.json", "will in S2: changes(a2.balance)"));
    // The deposit is the last call, so the change happens on the first step and `will` (one
    // or more steps ahead) finds no later change.
    CHECK(judge(ba2, "bank/sigma4.json", "changes(a2.balance)"));
    CHECK(!judge(ba2, "bank/sigma4.json", "will changes(a2.balance)"));
    CHECK(judge(ba2, "bank/sigma4.json", "forall a:Account. calls(_, deposit, a, [a3, 360]) -> changes(a.balance)"));
  }

  TEST_CASE("access: alias, field and continuation variable") {
    Program ba1 = test_support::program("bank/ba1.loo", "bank/clients.loo");
    using test_support::judge;
    CHECK(judge(ba1, "bank/sigma1.json", "access(a2, a2)"));
    CHECK(judge(ba1, "bank/sigma3.json", "access(x, a3)"));
    CHECK(!judge(ba1, "bank/sigma3.json", "access(a2, a3)"));
  }

  TEST_CASE("desugared changes agrees with the primitive") {
    Program ba2 = test_support::program("bank/ba2.loo", "bank/clients.loo");
    Config s4 = load_config(test_support::corpus("bank/sigma4.json"));
    Trace t = record_trace(ba2, s4, Bounds{});
    ExprPtr e = parse_expr("a2.balance");
    for (std::size_t i = 0; i < t.externals.size(); ++i) {
      EvalContext ctx = EvalContext::at(ba2, t, i, nullptr);
      CHECK(sat(ctx, *make_assertion(assertion::Changes{e})) == sat(ctx, *desugar_changes(e)));
    }
  }

  TEST_CASE("desugar_changes uses a fresh variable") {
    AssertionPtr d = desugar_changes(parse_expr("v.f + v$1"));
    CHECK(print_assertion(*d) == "exists v$2 = v.f + v$1. next not v.f + v$1 = v$2");
  }

  TEST_CASE("prev and was look at the past of the run") {
    Program p = test_support::program("safe/safe_v1.loo");
    Trace t = record_trace(p, test_support::driver_file("safe/owner_takes.drv"), Bounds{});
    REQUIRE(t.externals.size() >= 4);
    std::size_t last = t.externals.size() - 1;
    auto at = [&](std::size_t i, const char* text) {
      return sat(EvalContext::at(p, t, i, nullptr), *parse_assertion(text));
    };
    CHECK(!at(0, "prev true"));
    CHECK(!at(0, "was true"));
    CHECK(at(1, "prev true"));
    CHECK(at(last, "forall s:Safe. s.treasure = null and was not (s.treasure = null)"));
    CHECK(!at(last, "forall s:Safe. was (s.treasure = null)"));
  }

  TEST_CASE("set quantifiers refuse heaps above the cap") {
    Program ba1 = test_support::program("bank/ba1.loo", "bank/clients.loo");
    Config s1 = load_config(test_support::corpus("bank/sigma1.json"));
    Trace t = record_trace(ba1, s1, Bounds{});
    EvalContext ctx = EvalContext::at(ba1, t, 0, nullptr);
    CHECK(sat(ctx, *parse_assertion("exists S:SET. in S: not exists o. true")));
    ctx.bounds.set_cap = 4;
    CHECK_THROWS_AS(sat(ctx, *parse_assertion("exists S:SET. true")), BoundsExceeded);
  }

  TEST_CASE("alpha normalization renames shadowing binders") {
    AssertionPtr a = make_assertion(assertion::ForallObj{
        "x", std::nullopt,
        make_assertion(assertion::ExistsObj{"x", std::nullopt,
                                            make_assertion(assertion::ExprHolds{parse_expr("x = x")})})});
    AssertionPtr n = alpha_normalize(a);
    CHECK(print_assertion(*n) == "forall x. exists x$1. (x$1 = x$1)");
    CHECK(free_variables(*n).empty());
  }

  TEST_CASE("free variables and renaming") {
    AssertionPtr a = parse_assertion("forall o. access(o, y) and z in S");
    CHECK(free_variables(*a) == std::set<Identifier>{"S", "y", "z"});
    CHECK(print_assertion(*rename_free(a, "y", "w")) == "forall o. access(o, w) and z in S");
    CHECK(print_assertion(*rename_free(a, "o", "w")) == print_assertion(*a));
  }
}
