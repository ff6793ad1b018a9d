#include <doctest.h>

#include "chainmail/config_io.hpp"
#include "chainmail/runtime.hpp"
#include "support.hpp"

using namespace chainmail;

namespace {

Config two_objects() {
  Frame f{Continuation::of(StmtList{}), {{"this", Address{1}}, {"x", Address{2}}, {"n", NatValue{3}}}};
  Heap h;
  h[Address{1}] = ObjectRecord{"A", {{"f", Address{2}}}};
  h[Address{2}] = ObjectRecord{"B", {{"g", Address{1}}}};
  return make_config({f}, h);
}

}  // namespace

TEST_SUITE("runtime") {
  TEST_CASE("interp_var and interp_path") {
    Config c = two_objects();
    CHECK(interp_var(c, "x") == Value{Address{2}});
    CHECK(interp_var(c, "n") == Value{NatValue{3}});
    CHECK(!interp_var(c, "missing"));
    CHECK(interp_path(c, "this", "f") == Value{Address{2}});
    CHECK(!interp_path(c, "this", "nope"));
    CHECK(!interp_path(c, "n", "f"));
    CHECK(class_of(c, "x") == ClassId{"B"});
    CHECK(!class_of(c, "n"));
  }

  TEST_CASE("make_config sets next_address past the heap") {
    CHECK(two_objects().next_address == 3);
  }

  TEST_CASE("restrict keeps the stack, the chosen records and next_address") {
    Config c = two_objects();
    Config r = restrict(c, {Address{2}});
    CHECK(r.stack == c.stack);
    CHECK(r.heap->size() == 1);
    CHECK(r.heap->at(Address{2}) == c.heap->at(Address{2}));
    CHECK(r.next_address == c.next_address);
    CHECK(!dangling_references(r).empty());
    CHECK(dangling_references(c).empty());
    CHECK(restrict(c, {Address{1}, Address{2}}) == c);
  }

  TEST_CASE("restrict ignores addresses outside the heap") {
    Config r = restrict(two_objects(), {Address{2}, Address{77}});
    CHECK(r.heap->size() == 1);
  }

  TEST_CASE("restrict of sigma2 to S4") {
    Config s2 = load_config(test_support::corpus("bank/sigma2.json"));
    AddressSet s4{Address{91}, Address{1}, Address{2}, Address{3}, Address{4}, Address{11}};
    Config r = restrict(s2, s4);
    AddressSet dom;
    for (const auto& [a, rec] : *r.heap) {
      dom.insert(a);
      CHECK(rec == s2.heap->at(a));
    }
    CHECK(dom == s4);
    // The bank's ledger head, node 11's successor and client 91's peer all point outside S4.
    std::string dangling;
    for (const auto& d : dangling_references(r)) dangling += d + "\n";
    CAPTURE(dangling);
    CHECK(dangling.find("@1.ledger -> @12") != std::string::npos);
    CHECK(dangling.find("@11.next -> @14") != std::string::npos);
    CHECK(dangling.find("@91.peer -> @92") != std::string::npos);
  }

  TEST_CASE("fresh_name picks the smallest free suffix") {
    CHECK(fresh_name("x", {}) == "x$1");
    CHECK(fresh_name("x", {"x$1", "x$2"}) == "x$3");
    CHECK(fresh_name("x", {"x$2"}) == "x$1");
  }

  TEST_CASE("adapt renames the future's locals apart and keeps its this") {
    Frame past{Continuation::of(parse_stmts("y := x.m()")), {{"this", Address{1}}, {"x", Address{2}}}};
    Config pc = make_config({past}, *two_objects().heap);
    Frame fut{Continuation::of(parse_stmts("x := this.f")), {{"this", Address{2}}, {"x", NatValue{9}}}};
    Config fc = make_config({past, fut}, *two_objects().heap);
    Config a = adapt(pc, fc);
    REQUIRE(a.stack.size() == 2);
    const Frame& top = a.top();
    CHECK(top.vars.at("this") == Value{Address{2}});
    CHECK(top.vars.at("x") == Value{Address{2}});
    CHECK(top.vars.at("x$1") == Value{NatValue{9}});
    CHECK(print_stmts(top.contn.statements()) == "x$1 := this.f");
    CHECK(a.stack[0] == fc.stack[0]);
  }

  TEST_CASE("bind_top adds one binding") {
    Config c = bind_top(two_objects(), "z", Value{true});
    CHECK(interp_var(c, "z") == Value{true});
    CHECK(interp_var(c, "x") == Value{Address{2}});
  }

  TEST_CASE("config JSON round trip") {
    Config s1 = load_config(test_support::corpus("bank/sigma1.json"));
    CHECK(config_from_json(config_to_json(s1)) == s1);
    for (const Value& v : {Value{NullValue{}}, Value{Address{5}}, Value{AddressSet{Address{1}, Address{4}}},
                           Value{NatValue{12}}, Value{false}}) {
      CHECK(value_from_json(value_to_json(v)) == v);
    }
  }
}
