#include <doctest.h>

#include "stocs/model.hpp"
#include "stocs/parser.hpp"
#include "stocs/term.hpp"
#include "test_util.hpp"

using namespace stocs;
using stocs::testing::item;
using stocs::testing::num;
using stocs::testing::str;

namespace {

Component plain_component(const char* name, ProcessRef p) {
  Component c;
  c.name = name;
  c.process = std::move(p);
  c.repository = tuple_space();
  return c;
}

}  // namespace

TEST_CASE("substitution replaces variable uses in put payloads") {
  // put(<"go", ID>)@self.Q  with ID -> 3
  ProcessRef p = parse_process_text("put(<\"go\", ID>)@self.Q(ID)");
  ProcessRef q = substitute(p, Substitution{{"ID", num(3)}});
  CHECK(print_process(q) == "put(<\"go\", 3>)@self.Q(3)");
}

TEST_CASE("substitution on nil is the identity") {
  ProcessRef p = make_nil();
  CHECK(substitute(p, Substitution{{"x", num(1)}}) == p);
}

TEST_CASE("template formals shadow an outer substitution") {
  ProcessRef p = parse_process_text("get(<\"a\", ?x>)@self.P");
  ProcessRef q = substitute(p, Substitution{{"x", num(5)}});
  CHECK(print_process(q) == print_process(p));
}

TEST_CASE("substitution reaches target predicates and continuations") {
  ProcessRef p = parse_process_text("get(<\"b\", ?y>)@(loc = L).put(<\"m\", L, y>)@self.nil");
  ProcessRef q = substitute(p, Substitution{{"L", num(2)}, {"y", num(9)}});
  // y is rebound by the template, L is free
  CHECK(print_process(q) == "get(<\"b\", ?y>)@(loc = 2).put(<\"m\", 2, y>)@self.nil");
}

TEST_CASE("substitution is idempotent for ground bindings") {
  ProcessRef p = parse_process_text(
      "put(<\"go\", ID>)@self.get(<\"a\", ?ID>)@(near = L).put(<\"x\", ID, L>)@self.nil");
  Substitution theta{{"ID", num(3)}, {"L", str("here")}};
  ProcessRef once = substitute(p, theta);
  ProcessRef twice = substitute(once, theta);
  CHECK(print_process(once) == print_process(twice));
}

TEST_CASE("flatten walks the composition left to right") {
  Component c1 = plain_component("C1", make_nil());
  Component c2 = plain_component("C2", make_nil());
  Component c3 = plain_component("C3", make_nil());

  auto s = system_par(system_leaf(c1), system_par(system_leaf(c2), system_leaf(c3)));
  auto flat = flatten(s);
  REQUIRE(flat.size() == 3);
  CHECK(flat[0].name == "C1");
  CHECK(flat[1].name == "C2");
  CHECK(flat[2].name == "C3");

  CHECK(flatten(system_leaf(c1)).size() == 1);

  // duplicates are preserved: names need not be unique
  auto dup = system_par(system_par(system_leaf(c1), system_leaf(c2)), system_leaf(c1));
  auto flat2 = flatten(dup);
  REQUIRE(flat2.size() == 3);
  CHECK(flat2[2].name == "C1");
}

TEST_CASE("flatten preserves component counts across composition") {
  Component c = plain_component("C", make_nil());
  auto one = system_leaf(c);
  auto left = system_par(one, one);
  auto right = system_par(one, left);
  CHECK(flatten(system_par(left, right)).size() ==
        flatten(left).size() + flatten(right).size());
}

TEST_CASE("process printing is parseable and stable") {
  const char* samples[] = {
      "nil",
      "put(<\"b\">)@self.P",
      "get(<\"x\", ?v>)@(bikes > 0).nil",
      "put(<\"a\">)@self.nil + put(<\"b\">)@self.nil",
      "put(<\"a\">)@self.nil | get(<\"t\", ?x>)@self.Q(x)",
      "qry(<\"loc\", ?L>)@self.get(<\"r\", ?ID>)@((L = 1) && (loc = 2)).nil",
  };
  for (const char* text : samples) {
    ProcessRef p = parse_process_text(text);
    ProcessRef q = parse_process_text(print_process(p));
    CHECK(print_process(p) == print_process(q));
  }
}
