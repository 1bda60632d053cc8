#include <doctest.h>

#include "stocs/ctmc.hpp"
#include "stocs/parser.hpp"
#include "stocs/semantics.hpp"
#include "test_util.hpp"

using namespace stocs;
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

PredicateRef ok_pred() { return parse_predicate_text("ok = 1"); }

}  // namespace

TEST_CASE("an envelope term fires only its own delivery label") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef env = make_envelope(item({str("t")}), ok_pred(), 2.0);

  auto f = process_step(m, env, ProcessLabel::output_env(item({str("t")}), ok_pred()), e);
  REQUIRE(f.support_size() == 1);
  CHECK(f.at(make_nil()) == doctest::Approx(2.0));

  // blocked on everything else
  CHECK(process_step(m, env, ProcessLabel::output_put(item({str("t")}), Target::self_target()), e)
            .empty());
  CHECK(process_step(m, env, ProcessLabel::output_env(item({str("u")}), ok_pred()), e).empty());
  CHECK(process_step(m, env, ProcessLabel::output_env(item({str("t")}), pred_true()), e).empty());
}

TEST_CASE("an envelope in parallel with a process offers both moves") {
  Model m = stocs::testing::model_with({comp("c", make_nil())});
  InterfaceEvaluation e{{"id", str("c")}};
  ProcessRef host = parse_process_text("put(<\"x\">)@self.nil");
  ProcessRef both = make_parallel(host, make_envelope(item({str("t")}), ok_pred(), 2.0));

  auto put_side =
      process_step(m, both, ProcessLabel::output_put(item({str("x")}), Target::self_target()), e);
  REQUIRE(put_side.support_size() == 1);

  auto env_side = process_step(m, both, ProcessLabel::output_env(item({str("t")}), ok_pred()), e);
  REQUIRE(env_side.support_size() == 1);
  CHECK(env_side.at(make_parallel(host, make_nil())) == doctest::Approx(2.0));
}

TEST_CASE("a network put input attaches an envelope without evaluating the predicate") {
  auto rates = rates_json(R"({"rates": [{"action": "envelope", "rate": "1.5"}]})");
  // the receiver currently violates the predicate; it must still accept
  auto [m, s] = stocs::testing::system_with({comp("r", make_nil(), {}, {{"ok", num(0)}})}, {}, rates);
  auto f = component_put_input(m, 0, s.comps[0], InterfaceEvaluation{}, item({str("t")}), ok_pred(),
                               Semantics::net_or);
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(1.0));
  REQUIRE(succ->envelopes.size() == 1);
  CHECK(succ->envelopes[0].rate == doctest::Approx(1.5));  // frozen delivery rate
  CHECK(succ->knowledge.empty());
}

TEST_CASE("a network put input with loss keeps mass one") {
  auto rates = rates_json(R"({"errors": [{"action": "envelope", "prob": "0.2"}]})");
  auto [m, s] = stocs::testing::system_with({comp("r", make_nil(), {}, {{"ok", num(1)}})}, {}, rates);
  auto f = component_put_input(m, 0, s.comps[0], InterfaceEvaluation{}, item({str("t")}), ok_pred(),
                               Semantics::net_or);
  REQUIRE(f.support_size() == 2);
  CHECK(f.at(s.comps[0]) == doctest::Approx(0.2));
  CHECK(f.total_mass() == doctest::Approx(1.0));
}

TEST_CASE("envelope delivery accepts at a satisfying component") {
  auto [m, s] = stocs::testing::system_with({comp("r", make_nil(), {}, {{"ok", num(1)}})});
  CompPtr with_env = make_component_state(s.comps[0]->def, m.defs, s.comps[0]->knowledge,
                                          s.comps[0]->process,
                                          {Envelope{item({str("t")}), ok_pred(), 2.0}});
  auto f = component_env_deliver(m, 0, with_env, item({str("t")}), ok_pred());
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(2.0));  // the frozen rate drives delivery
  CHECK(succ->knowledge.count(item({str("t")})) == 1);
  CHECK(succ->envelopes.empty());
}

TEST_CASE("envelope delivery refuses at a non-satisfying component") {
  auto [m, s] = stocs::testing::system_with({comp("r", make_nil(), {}, {{"ok", num(0)}})});
  CompPtr with_env = make_component_state(s.comps[0]->def, m.defs, s.comps[0]->knowledge,
                                          s.comps[0]->process,
                                          {Envelope{item({str("t")}), ok_pred(), 2.0}});
  auto f = component_env_deliver(m, 0, with_env, item({str("t")}), ok_pred());
  REQUIRE(f.support_size() == 1);
  const auto& [succ, mass] = *f.entries().begin();
  CHECK(mass == doctest::Approx(2.0));
  CHECK(succ->knowledge.empty());  // consumed without effect
  CHECK(succ->envelopes.empty());
}

TEST_CASE("two-phase put: shipping then delivery") {
  auto rates = rates_json(
      R"({"rates": [{"action": "put", "rate": "3.0"}, {"action": "envelope", "rate": "2.0"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("snd", parse_process_text("put(<\"t\">)@(ok = 1).put(<\"next\">)@self.nil"), {},
            {{"ok", num(0)}}),
       comp("rcv", make_nil(), {}, {{"ok", num(1)}})},
      {}, rates);

  // phase 1: the broadcast ships the envelope and the sender resumes
  auto phase1 = enabled_transitions(m, s, Semantics::net_or);
  REQUIRE(phase1.size() == 1);
  CHECK(phase1[0].label.kind == SystemLabel::Kind::output_put);
  CHECK(phase1[0].continuation.total_mass() == doctest::Approx(3.0));
  REQUIRE(phase1[0].continuation.support_size() == 1);
  SystemState mid = phase1[0].continuation.entries().begin()->first;
  CHECK(mid.comps[1]->envelopes.size() == 1);
  CHECK(mid.comps[1]->knowledge.empty());

  // the sender is already active concurrently with the pending envelope
  auto phase2 = enabled_transitions(m, mid, Semantics::net_or);
  REQUIRE(phase2.size() == 2);
  bool saw_env = false, saw_local = false;
  for (const auto& tr : phase2) {
    if (tr.label.kind == SystemLabel::Kind::env_deliver) {
      saw_env = true;
      CHECK(tr.continuation.total_mass() == doctest::Approx(2.0));
      const auto& done = tr.continuation.entries().begin()->first;
      CHECK(done.comps[1]->knowledge.count(item({str("t")})) == 1);
      CHECK(done.comps[1]->envelopes.empty());
    }
    if (tr.label.kind == SystemLabel::Kind::sync_put_self) saw_local = true;
  }
  CHECK(saw_env);
  CHECK(saw_local);
}

TEST_CASE("a predicate flip between shipping and delivery drops the item") {
  // the receiver satisfies the predicate when the message ships, then
  // withdraws the knowledge the predicate depends on before it arrives
  Component rcv;
  rcv.name = "rcv";
  rcv.process = parse_process_text("get(<\"m\", ?x>)@self.nil");
  rcv.knowledge = KnowledgeState({item({str("m"), num(1)})});
  AttributeRule r;
  r.kind = AttributeRule::Kind::field;
  r.tag = "m";
  r.index = 1;
  rcv.interface.rules.emplace_back("mode", r);
  rcv.repository = tuple_space();
  Component snd = comp("snd", parse_process_text("put(<\"t\">)@(mode = 1).nil"));
  auto [m2, s2] = stocs::testing::system_with({snd, rcv});

  auto phase1 = enabled_transitions(m2, s2, Semantics::net_or);
  REQUIRE(!phase1.empty());
  const EnabledTransition* ship = nullptr;
  for (const auto& tr : phase1)
    if (tr.label.kind == SystemLabel::Kind::output_put) ship = &tr;
  REQUIRE(ship);
  SystemState mid = ship->continuation.entries().begin()->first;
  REQUIRE(mid.comps[1]->envelopes.size() == 1);

  // the receiver's own local get removes the tuple the predicate reads
  auto steps = enabled_transitions(m2, mid, Semantics::net_or);
  const EnabledTransition* local = nullptr;
  for (const auto& tr : steps)
    if (tr.label.kind == SystemLabel::Kind::sync_gq) local = &tr;
  REQUIRE(local);
  SystemState flipped = local->continuation.entries().begin()->first;
  REQUIRE(flipped.comps[1]->envelopes.size() == 1);

  auto delivery = enabled_transitions(m2, flipped, Semantics::net_or);
  REQUIRE(delivery.size() == 1);
  CHECK(delivery[0].label.kind == SystemLabel::Kind::env_deliver);
  const auto& final_state = delivery[0].continuation.entries().begin()->first;
  CHECK(final_state.comps[1]->knowledge.count(item({str("t")})) == 0);
  CHECK(final_state.comps[1]->envelopes.empty());
}

TEST_CASE("network semantics reaches strictly more states on predicate puts") {
  auto mk = [&]() {
    return stocs::testing::system_with(
        {comp("snd", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
         comp("rcv", make_nil(), {}, {{"ok", num(1)}})});
  };
  auto [m1, s1] = mk();
  Ctmc act = build_ctmc(m1, s1, Semantics::act_or, 1000);
  Ctmc net = build_ctmc(m1, s1, Semantics::net_or, 1000);
  CHECK(net.size() > act.size());
  CHECK(act.size() == 2);
  CHECK(net.size() == 3);
}

TEST_CASE("every envelope created is consumed exactly once on every path") {
  auto rates = rates_json(
      R"({"rates": [{"action": "put", "rate": "1.0"}, {"action": "envelope", "rate": "2.0"}],
          "errors": [{"action": "envelope", "prob": "0.3"}]})");
  auto [m, s] = stocs::testing::system_with(
      {comp("snd", parse_process_text("put(<\"t\">)@(ok = 1).nil"), {}, {{"ok", num(0)}}),
       comp("r1", make_nil(), {}, {{"ok", num(1)}}),
       comp("r2", make_nil(), {}, {{"ok", num(0)}})},
      {}, rates);
  Ctmc chain = build_ctmc(m, s, Semantics::net_or, 1000);
  auto envelope_count = [](const SystemState& st) {
    std::size_t n = 0;
    for (const auto& c : st.comps) n += c->envelopes.size();
    return n;
  };
  for (std::size_t i = 0; i < chain.size(); ++i) {
    std::size_t here = envelope_count(chain.states[i]);
    for (const auto& e : chain.edges[i]) {
      std::size_t there = envelope_count(chain.states[e.target]);
      // a transition either ships envelopes (put broadcast) or consumes one
      bool ships = e.label.rfind("po!", 0) == 0;
      bool delivers = e.label.rfind("env!", 0) == 0;
      if (ships) CHECK(there >= here);
      if (delivers) CHECK(there == here - 1);
    }
    // terminal states hold no undelivered envelopes
    if (chain.edges[i].empty()) CHECK(here == 0);
  }
}
