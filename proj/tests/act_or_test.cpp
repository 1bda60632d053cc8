#include <doctest.h>

#include <map>
#include <set>

#include "stocs/parser.hpp"
#include "stocs/semantics.hpp"
#include "test_util.hpp"

using namespace stocs;
using stocs::testing::Gen;
using stocs::testing::item;
using stocs::testing::num;
using stocs::testing::str;

namespace {

Component comp(const char* name, ProcessRef p, std::vector<Item> knowledge = {},
               std::vector<std::pair<std::string, Value>> const_attrs = {}) {
  Component c;
  c.name = name;
  c.process = std::move(p);
  c.knowledge = KnowledgeState(std::move(knowledge));
  for (auto& [attr, v] : const_attrs) {
    AttributeRule r;
    r.kind = AttributeRule::Kind::constant;
    r.constant = v;
    c.interface.rules.emplace_back(attr, r);
  }
  c.repository = tuple_space();
  return c;
}

std::shared_ptr<RateConfig> rates_json(const char* text) {
  return std::make_shared<RateConfig>(RateConfig::from_json_text(text));
}

Template tpl_a_x() {
  Template t;
  t.fields.push_back(TemplateField::ground(str("a")));
  t.fields.push_back(TemplateField::var("x"));
  return t;
}

const InterfaceEvaluation kSomeEval{{"id", str("peer")}};

double mass_of(const ProcCont& f, const char* process_text) {
  return f.at(parse_process_text(process_text));
}

}  // namespace

// ---------------------------------------------------------------------------
// process relation
// ---------------------------------------------------------------------------

TEST_CASE("the inert process moves under no label") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  CHECK(process_step(m, make_nil(), ProcessLabel::output_put(item({str("b")}), Target::self_target()), e)
            .empty());
  CHECK(process_step(m, make_nil(),
                     ProcessLabel::output_gq(ActionKind::get, e, tpl_a_x(), item({str("a"), num(1)}),
                                             Target::self_target()),
                     e)
            .empty());
}

TEST_CASE("a put prefix fires on its own label with the configured rate") {
  auto rates = rates_json(R"({"rates": [{"action": "put", "rate": "2.5"}]})");
  Model m = stocs::testing::model_with({comp("c", make_nil())}, {}, rates);
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text("put(<\"b\">)@self.nil");
  auto f = process_step(m, p, ProcessLabel::output_put(item({str("b")}), Target::self_target()), e);
  CHECK(f.support_size() == 1);
  CHECK(mass_of(f, "nil") == doctest::Approx(2.5));
}

TEST_CASE("a put prefix blocks on any other label") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text("put(<\"b\">)@self.nil");
  CHECK(process_step(m, p, ProcessLabel::output_put(item({str("c")}), Target::self_target()), e)
            .empty());
  CHECK(process_step(m, p, ProcessLabel::output_put(item({str("b")}), Target::predicate(pred_true())), e)
            .empty());
  CHECK(process_step(m, p,
                     ProcessLabel::output_gq(ActionKind::get, e, tpl_a_x(), item({str("a"), num(1)}),
                                             Target::self_target()),
                     e)
            .empty());
}

TEST_CASE("a get prefix binds the matched item into its continuation") {
  auto rates = rates_json(R"({"rates": [{"action": "get", "rate": "1.5"}]})");
  Model m = stocs::testing::model_with({comp("c", make_nil())}, {}, rates);
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text("get(<\"a\", ?x>)@(ok = 1).put(<\"echo\", x>)@self.nil");
  auto label = ProcessLabel::output_gq(ActionKind::get, kSomeEval, tpl_a_x(),
                                       item({str("a"), num(7)}), Target::predicate(parse_predicate_text("ok = 1")));
  auto f = process_step(m, p, label, e);
  CHECK(f.support_size() == 1);
  CHECK(mass_of(f, "put(<\"echo\", 7>)@self.nil") == doctest::Approx(1.5));
}

TEST_CASE("a get prefix blocks when the item does not match or the label differs") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text("get(<\"a\", ?x>)@self.nil");
  // same template, item that cannot match
  auto bad_item = ProcessLabel::output_gq(ActionKind::get, e, tpl_a_x(), item({str("b"), num(1)}),
                                          Target::self_target());
  CHECK(process_step(m, p, bad_item, e).empty());
  // a different action kind entirely
  auto qry_label = ProcessLabel::output_gq(ActionKind::qry, e, tpl_a_x(), item({str("a"), num(1)}),
                                           Target::self_target());
  CHECK(process_step(m, p, qry_label, e).empty());
  auto put_label = ProcessLabel::output_put(item({str("a"), num(1)}), Target::self_target());
  CHECK(process_step(m, p, put_label, e).empty());
}

TEST_CASE("choice sums the continuations of its branches") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text(
      "put(<\"t\">)@self.put(<\"l\">)@self.nil + put(<\"t\">)@self.put(<\"r\">)@self.nil");
  auto f = process_step(m, p, ProcessLabel::output_put(item({str("t")}), Target::self_target()), e);
  CHECK(f.support_size() == 2);
  CHECK(mass_of(f, "put(<\"l\">)@self.nil") == doctest::Approx(1.0));
  CHECK(mass_of(f, "put(<\"r\">)@self.nil") == doctest::Approx(1.0));

  // identical branches accumulate rate on one continuation
  ProcessRef twice = parse_process_text("put(<\"t\">)@self.nil + put(<\"t\">)@self.nil");
  auto g = process_step(m, twice, ProcessLabel::output_put(item({str("t")}), Target::self_target()), e);
  CHECK(g.support_size() == 1);
  CHECK(mass_of(g, "nil") == doctest::Approx(2.0));
}

TEST_CASE("definitions unfold with call-by-value parameters") {
  DefinitionsTable defs;
  defs.emplace("A", ProcessDef{{"v"}, parse_process_text("put(<\"go\", v>)@self.A(v)")});
  Model m = stocs::testing::model_with({comp("c", make_nil())}, defs);
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = make_call("A", {TupleField::value_field(num(3))});
  auto f = process_step(m, p, ProcessLabel::output_put(item({str("go"), num(3)}), Target::self_target()), e);
  CHECK(f.support_size() == 1);
  CHECK(mass_of(f, "A(3)") == doctest::Approx(1.0));
}

TEST_CASE("parallel composition interleaves both sides") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef p = parse_process_text("put(<\"t\">)@self.nil | put(<\"t\">)@self.nil");
  auto f = process_step(m, p, ProcessLabel::output_put(item({str("t")}), Target::self_target()), e);
  // nil | P  and  P | nil are distinct terms, each with the prefix rate
  CHECK(f.support_size() == 2);
  CHECK(mass_of(f, "nil | put(<\"t\">)@self.nil") == doctest::Approx(1.0));
  CHECK(mass_of(f, "put(<\"t\">)@self.nil | nil") == doctest::Approx(1.0));

  // against the algebra: pair(left, char right) + pair(char left, right)
  ProcessRef l = parse_process_text("put(<\"t\">)@self.nil");
  auto pl = process_step(m, l, ProcessLabel::output_put(item({str("t")}), Target::self_target()), e);
  auto lifted_left = futs_pair<ProcessRef, ProcessLess>(
      pl, ProcCont::unit(l), [](const ProcessRef& a, const ProcessRef& b) { return make_parallel(a, b); });
  auto lifted_right = futs_pair<ProcessRef, ProcessLess>(
      ProcCont::unit(l), pl, [](const ProcessRef& a, const ProcessRef& b) { return make_parallel(a, b); });
  CHECK(approx_equal(f, lifted_left + lifted_right));
}

// ---------------------------------------------------------------------------
// component relation, put rules
// ---------------------------------------------------------------------------

TEST_CASE("a local put pairs the knowledge update with the continuation") {
  auto rates = rates_json(R"({"rates": [{"action": "put", "rate": "2.0"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("c", parse_process_text("put(<\"b\">)@self.nil"))}, {}, rates);
  auto f = component_put_local(m, 0, s.comps[0], item({str("b")}));
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(2.0));
  CHECK(succ->knowledge.count(item({str("b")})) == 1);
  CHECK(succ->process->kind == Process::Kind::inert);
}

TEST_CASE("an output put leaves the knowledge untouched") {
  auto [m, s] = stocs::testing::system_with(
      {comp("c", parse_process_text("put(<\"b\">)@(ok = 1).nil"), {item({str("k")})})});
  auto f = component_put_output(m, 0, s.comps[0], item({str("b")}), parse_predicate_text("ok = 1"));
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(1.0));
  CHECK(succ->knowledge == s.comps[0]->knowledge);
}

TEST_CASE("an input put at a non-satisfying component is a Dirac no-op") {
  auto [m, s] = stocs::testing::system_with({comp("c", make_nil(), {}, {{"ok", num(0)}})});
  auto f = component_put_input(m, 0, s.comps[0], kSomeEval, item({str("b")}),
                               parse_predicate_text("ok = 1"), Semantics::act_or);
  REQUIRE(f.support_size() == 1);
  CHECK(f.at(s.comps[0]) == doctest::Approx(1.0));
}

TEST_CASE("an input put without loss is a Dirac knowledge update") {
  auto [m, s] = stocs::testing::system_with({comp("c", make_nil(), {}, {{"ok", num(1)}})});
  auto f = component_put_input(m, 0, s.comps[0], kSomeEval, item({str("b")}),
                               parse_predicate_text("ok = 1"), Semantics::act_or);
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(1.0));
  CHECK(succ->knowledge.count(item({str("b")})) == 1);
}

TEST_CASE("an input put with loss splits mass between failure and update") {
  auto rates = rates_json(R"({"errors": [{"action": "put", "prob": "0.1"}]})");
  auto [m, s] = stocs::testing::system_with({comp("c", make_nil(), {}, {{"ok", num(1)}})}, {}, rates);
  auto f = component_put_input(m, 0, s.comps[0], kSomeEval, item({str("b")}),
                               parse_predicate_text("ok = 1"), Semantics::act_or);
  // by hand: [C -> 0.1] + [C with b -> 0.9]
  REQUIRE(f.support_size() == 2);
  CHECK(f.at(s.comps[0]) == doctest::Approx(0.1));
  double other = f.total_mass() - f.at(s.comps[0]);
  CHECK(other == doctest::Approx(0.9));
}

TEST_CASE("input continuations always carry total mass one") {
  Gen gen(5);
  for (int i = 0; i < 500; ++i) {
    double p_err = gen.unit();
    char buf[128];
    std::snprintf(buf, sizeof buf, R"({"errors": [{"action": "put", "prob": "%.6f"}]})", p_err);
    auto rates = rates_json(buf);
    std::vector<Item> k;
    int nk = gen.range(0, 4);
    for (int j = 0; j < nk; ++j) k.push_back(item({str("x"), num(gen.range(0, 3))}));
    bool ok = gen.flip();
    auto [m, s] = stocs::testing::system_with(
        {comp("c", make_nil(), std::move(k), {{"ok", num(ok ? 1 : 0)}})}, {}, rates);
    auto f = component_put_input(m, 0, s.comps[0], kSomeEval, item({str("b"), num(gen.range(0, 5))}),
                                 parse_predicate_text("ok = 1"), Semantics::act_or);
    CHECK(f.total_mass() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

// ---------------------------------------------------------------------------
// system relation, put synchronization
// ---------------------------------------------------------------------------

TEST_CASE("a broadcast put advances the sender and updates every receiver") {
  auto rates = rates_json(R"({"rates": [{"action": "put", "rate": "3.0"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("a", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("b", make_nil(), {}, {{"ok", num(1)}})},
      {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  CHECK(transitions[0].label.kind == SystemLabel::Kind::output_put);
  CHECK(transitions[0].continuation.total_mass() == doctest::Approx(3.0));
  for (const auto& [succ, mass] : transitions[0].continuation.entries()) {
    CHECK(succ.comps[0]->process->kind == Process::Kind::inert);
    CHECK(succ.comps[1]->knowledge.count(item({str("t")})) == 1);
  }
}

TEST_CASE("a refusing receiver leaves only the sender advanced") {
  auto rates = rates_json(R"({"rates": [{"action": "put", "rate": "3.0"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("a", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("b", make_nil(), {}, {{"ok", num(0)}})},
      {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  REQUIRE(transitions[0].continuation.support_size() == 1);
  const auto& [succ, mass] = *transitions[0].continuation.entries().begin();
  CHECK(mass == doctest::Approx(3.0));
  CHECK(succ.comps[0]->process->kind == Process::Kind::inert);
  CHECK(succ.comps[1]->knowledge.empty());
  CHECK(succ.comps[1] == s.comps[1]);
}

TEST_CASE("broadcast with loss reaches delivered and lost states at split rates") {
  auto rates = rates_json(
      R"({"rates": [{"action": "put", "rate": "2.0"}],
          "errors": [{"action": "put", "prob": "0.1"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("a", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("b", make_nil(), {}, {{"ok", num(1)}})},
      {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  const auto& cont = transitions[0].continuation;
  REQUIRE(cont.support_size() == 2);
  // hand-derived: rate 2.0 splits 0.9 delivered / 0.1 lost
  double delivered = 0.0, lost = 0.0;
  for (const auto& [succ, mass] : cont.entries()) {
    if (succ.comps[1]->knowledge.count(item({str("t")})) == 1)
      delivered = mass;
    else
      lost = mass;
  }
  CHECK(delivered == doctest::Approx(1.8));
  CHECK(lost == doctest::Approx(0.2));
}

TEST_CASE("the output label mass equals the process rate for any receiver pattern") {
  auto rates = rates_json(R"({"rates": [{"action": "put", "rate": "2.5"}]})");
  Gen gen(17);
  for (int n = 2; n <= 4; ++n) {
    for (int pattern = 0; pattern < (1 << (n - 1)); ++pattern) {
      std::vector<Component> comps;
      comps.push_back(comp("s", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {},
                           {{"ok", num(0)}}));
      for (int j = 0; j < n - 1; ++j)
        comps.push_back(comp("r", make_nil(), {}, {{"ok", num((pattern >> j) & 1)}}));
      auto [m, s] = stocs::testing::system_with(std::move(comps), {}, rates);
      auto transitions = enabled_transitions(m, s, Semantics::act_or);
      REQUIRE(transitions.size() == 1);
      CHECK(transitions[0].continuation.total_mass() == doctest::Approx(2.5).epsilon(1e-9));
    }
  }
}

TEST_CASE("broadcast successors factor into independent per-receiver branches") {
  auto rates = rates_json(
      R"({"rates": [{"action": "put", "rate": "1.0"}],
          "errors": [{"action": "put", "prob": "0.25"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("snd", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("r1", make_nil(), {}, {{"ok", num(1)}}),
       comp("r2", make_nil(), {}, {{"ok", num(1)}})},
      {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  const auto& cont = transitions[0].continuation;
  REQUIRE(cont.support_size() == 4);  // 2 branches per receiver

  // brute-force factorization from the component-level inputs
  auto in1 = component_put_input(m, 1, s.comps[1], s.comps[0]->eval, item({str("t")}),
                                 parse_predicate_text("ok = 1"), Semantics::act_or);
  auto in2 = component_put_input(m, 2, s.comps[2], s.comps[0]->eval, item({str("t")}),
                                 parse_predicate_text("ok = 1"), Semantics::act_or);
  auto out0 = component_put_output(m, 0, s.comps[0], item({str("t")}), parse_predicate_text("ok = 1"));
  for (const auto& [succ, mass] : cont.entries()) {
    double expect = out0.at(succ.comps[0]) * in1.at(succ.comps[1]) * in2.at(succ.comps[2]);
    CHECK(mass == doctest::Approx(expect).epsilon(1e-9));
  }
}

// ---------------------------------------------------------------------------
// get / qry
// ---------------------------------------------------------------------------

TEST_CASE("a local get is blocked without a matching item") {
  auto [m, s] = stocs::testing::system_with(
      {comp("c", parse_process_text("get(<\"bike\">)@self.nil")/* no knowledge */)});
  CHECK(enabled_transitions(m, s, Semantics::act_or).empty());
}

TEST_CASE("a local get consumes the item and applies the binding") {
  auto [m, s] = stocs::testing::system_with(
      {comp("c", parse_process_text("get(<\"a\", ?x>)@self.put(<\"got\", x>)@self.nil"),
            {item({str("a"), num(1)}), item({str("a"), num(2)})})});
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 2);  // one label per candidate item
  for (const auto& tr : transitions) {
    REQUIRE(tr.continuation.support_size() == 1);
    const auto& [succ, mass] = *tr.continuation.entries().begin();
    CHECK(mass == doctest::Approx(0.5));  // rate 1 times the uniform pick
    CHECK(succ.comps[0]->knowledge.size() == 1);
  }
}

TEST_CASE("a qry leaves the responder knowledge unchanged") {
  auto [m, s] = stocs::testing::system_with(
      {comp("asker", parse_process_text("qry(<\"info\", ?v>)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("oracle", make_nil(), {item({str("info"), num(42)})}, {{"ok", num(1)}})});
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  const auto& [succ, mass] = *transitions[0].continuation.entries().begin();
  CHECK(mass == doctest::Approx(1.0));
  CHECK(succ.comps[1]->knowledge == s.comps[1]->knowledge);
  CHECK(succ.comps[0]->process->kind == Process::Kind::inert);
}

TEST_CASE("a remote get splits mass by the responder's item distribution") {
  auto [m, s] = stocs::testing::system_with(
      {comp("asker", parse_process_text("get(<\"a\", ?x>)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("holder", make_nil(), {item({str("a"), num(1)}), item({str("a"), num(2)})},
            {{"ok", num(1)}})});
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 2);
  for (const auto& tr : transitions) {
    // each item carries probability 1/2 under the uniform withdraw
    CHECK(tr.continuation.total_mass() == doctest::Approx(0.5));
  }
}

TEST_CASE("responders race with rate assigned component-wise") {
  auto rates = rates_json(R"({"rates": [{"action": "get", "rate": "dst.speed"}]})");
  std::vector<Component> comps;
  comps.push_back(comp("asker", parse_process_text("get(<\"t\">)@(ok = 1).nil"), {},
                       {{"ok", num(0)}}));
  for (int j = 1; j <= 3; ++j)
    comps.push_back(comp("resp", make_nil(), {item({str("t")})},
                         {{"ok", num(1)}, {"speed", num(j)}}));
  auto [m, s] = stocs::testing::system_with(std::move(comps), {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);  // same item, one label; three successor states
  const auto& cont = transitions[0].continuation;
  REQUIRE(cont.support_size() == 3);
  CHECK(cont.total_mass() == doctest::Approx(6.0));
  // responder j answered iff its item is gone; expected mass = its own rate
  for (const auto& [succ, mass] : cont.entries())
    for (std::size_t j = 1; j <= 3; ++j)
      if (succ.comps[j]->knowledge.empty())
        CHECK(mass == doctest::Approx(*numeric(succ.comps[j]->eval.at("speed"))));
}

TEST_CASE("a component is never a responder to its own request") {
  // the asker itself holds a matching item but must not answer its own get
  auto [m, s] = stocs::testing::system_with(
      {comp("asker", parse_process_text("get(<\"t\">)@(ok = 1).nil"), {item({str("t")})},
            {{"ok", num(1)}})});
  CHECK(enabled_transitions(m, s, Semantics::act_or).empty());
}

TEST_CASE("gq responders with empty stores contribute nothing to the race") {
  auto [m, s] = stocs::testing::system_with(
      {comp("asker", parse_process_text("get(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("full", make_nil(), {item({str("t")})}, {{"ok", num(1)}}),
       comp("empty", make_nil(), {}, {{"ok", num(1)}})});
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  CHECK(transitions[0].continuation.support_size() == 1);
  CHECK(transitions[0].continuation.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("race probabilities follow the embedded jump chain") {
  // responders with rates 1, 2, 3: chance of answering = rate / 6
  auto rates = rates_json(R"({"rates": [{"action": "get", "rate": "dst.speed"}]})");
  std::vector<Component> comps;
  comps.push_back(comp("asker", parse_process_text("get(<\"t\">)@(ok = 1).nil"), {},
                       {{"ok", num(0)}}));
  for (int j = 1; j <= 3; ++j)
    comps.push_back(comp("resp", make_nil(), {item({str("t")})},
                         {{"ok", num(1)}, {"speed", num(j)}}));
  auto [m, s] = stocs::testing::system_with(std::move(comps), {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  // brute force over <= 3 responders: mass_j / total = j/6
  double total = transitions[0].continuation.total_mass();
  std::multiset<double> probs;
  for (const auto& [succ, mass] : transitions[0].continuation.entries())
    probs.insert(mass / total);
  std::multiset<double> expect{1.0 / 6.0, 2.0 / 6.0, 3.0 / 6.0};
  auto it = expect.begin();
  for (double p : probs) CHECK(p == doctest::Approx(*it++).epsilon(1e-9));
}

TEST_CASE("self-targeted gq uses the component's own evaluation for the rate") {
  auto rates = rates_json(R"({"rates": [{"action": "get", "rate": "dst.speed"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("c", parse_process_text("get(<\"t\">)@self.nil"), {item({str("t")})},
            {{"speed", num(4)}})},
      {}, rates);
  auto transitions = enabled_transitions(m, s, Semantics::act_or);
  REQUIRE(transitions.size() == 1);
  CHECK(transitions[0].continuation.total_mass() == doctest::Approx(4.0));
}
