#include <doctest.h>

#include "chainmail/frontend.hpp"
#include "chainmail/ghost_eval.hpp"
#include "chainmail/sampling.hpp"

using namespace chainmail;

namespace {

EvalResult eval(const std::string& text, std::uint32_t fuel = 1000) {
  return eval_expr(node_module(), node_fixture(), *parse_expr(text), fuel);
}

}  // namespace

TEST_SUITE("ghost_eval") {
  TEST_CASE("acyclic chain is defined true") {
    EvalResult r = eval("acyc.acyclic");
    REQUIRE(r.is_defined());
    CHECK(r.value() == Value{true});
    CHECK(eval("acyc.last").value() == Value{Address{1}});
  }

  TEST_CASE("a cycle exhausts fuel at every budget") {
    for (std::uint32_t fuel : {10u, 100u, 1000u}) {
      CAPTURE(fuel);
      EvalResult a = eval("cyc.acyclic", fuel);
      EvalResult l = eval("cyc.last", fuel);
      CHECK(!a.is_defined());
      CHECK(a.reason() == UndefinedReason::FuelExhausted);
      CHECK(!l.is_defined());
      CHECK(l.reason() == UndefinedReason::FuelExhausted);
    }
  }

  TEST_CASE("fuel counts nested ghost calls") {
    ModuleDef m = parse_module(R"(
      class Node {
        field next
        ghost depth() { if this.next = null then 0 else this.next.depth + 1 }
      })");
    Heap h;
    h[Address{1}] = ObjectRecord{"Node", {{"next", Address{2}}}};
    h[Address{2}] = ObjectRecord{"Node", {{"next", Address{3}}}};
    h[Address{3}] = ObjectRecord{"Node", {{"next", NullValue{}}}};
    Config c = make_config({Frame{Continuation::of(StmtList{}), {{"this", Address{1}}, {"n", Address{1}}}}}, h);
    ExprPtr e = parse_expr("n.depth");
    CHECK(eval_expr(m, c, *e, 3).value() == Value{NatValue{2}});
    CHECK(eval_expr(m, c, *e, 2).reason() == UndefinedReason::FuelExhausted);
  }

  TEST_CASE("undefined reasons") {
    CHECK(eval("nobody").reason() == UndefinedReason::Unbound);
    CHECK(eval("null.next").reason() == UndefinedReason::BadReceiver);
    CHECK(eval("acyc.missing").reason() == UndefinedReason::NoSuchGhost);
    CHECK(eval("acyc + 1").reason() == UndefinedReason::StuckArith);
    CHECK(eval("if acyc then 1 else 2").reason() == UndefinedReason::NonBoolean);
  }

  TEST_CASE("operators") {
    CHECK(eval("2 + 3 = 5").value() == Value{true});
    CHECK(eval("2 >= 3").value() == Value{false});
    CHECK(eval("acyc = acyc").value() == Value{true});
    CHECK(eval("acyc.next = null").value() == Value{true});
    CHECK(eval("cyc.next = cyc").value() == Value{true});
    CHECK(eval("if true then 1 else cyc.last").value() == Value{NatValue{1}});
  }

  TEST_CASE("equality of an undefined side is undefined") {
    CHECK(!eval("cyc.last = cyc.last", 50).is_defined());
    CHECK(!eval("cyc.acyclic = false", 50).is_defined());
  }

  TEST_CASE("is_true only for a defined true") {
    CHECK(eval("acyc.acyclic").is_true());
    CHECK(!eval("cyc.acyclic", 10).is_true());
    CHECK(!eval("1").is_true());
  }
}
