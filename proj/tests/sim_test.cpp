#include <doctest.h>

#include <cmath>

#include "stocs/io.hpp"
#include "stocs/parser.hpp"
#include "stocs/sim.hpp"
#include "test_util.hpp"

using namespace stocs;
using stocs::testing::item;
using stocs::testing::num;
using stocs::testing::str;

namespace {

Component flag_component(const char* proc_text) {
  Component c;
  c.name = "c";
  c.process = parse_process_text(proc_text);
  AttributeRule r;
  r.kind = AttributeRule::Kind::count;
  r.tag = "done";
  c.interface.rules.emplace_back("flag", r);
  c.repository = tuple_space();
  return c;
}

SimOptions options_with(double t_end, std::uint64_t seed, std::vector<Measure> ms,
                        double step = 0.0) {
  SimOptions o;
  o.t_end = t_end;
  o.seed = seed;
  o.measures = std::move(ms);
  o.grid = make_grid(t_end, step > 0.0 ? step : t_end);
  return o;
}

}  // namespace

TEST_CASE("the same seed reproduces the trace exactly") {
  auto [m, s] = stocs::testing::system_with(
      {flag_component("put(<\"done\">)@self.put(<\"done\">)@self.nil")});
  SimOptions o = options_with(5.0, 42, {Measure::attr_of("flag", 0, "flag")}, 1.0);
  o.record_jumps = true;
  Trace a = simulate(m, s, Semantics::act_or, o);
  Trace b = simulate(m, s, Semantics::act_or, o);
  CHECK(a.jump_count == b.jump_count);
  CHECK(a.jumps == b.jumps);
  CHECK(a.jump_state_keys == b.jump_state_keys);
  CHECK(a.samples == b.samples);

  SimOptions other = o;
  other.seed = 43;
  Trace c = simulate(m, s, Semantics::act_or, other);
  CHECK(a.jumps != c.jumps);
}

TEST_CASE("empirical two-state probability matches the closed form") {
  auto [m, s] = stocs::testing::system_with({flag_component("put(<\"done\">)@self.nil")});
  SimOptions o = options_with(1.0, 7, {Measure::attr_of("flag", 0, "flag")});
  auto samples = replicate_samples(m, s, Semantics::act_or, o, 10000, 4);
  double hits = 0.0;
  for (const auto& rep : samples) hits += rep.back()[0];
  double p_hat = hits / 10000.0;
  double p = 1.0 - std::exp(-1.0);
  double se = std::sqrt(p * (1.0 - p) / 10000.0);
  CHECK(std::abs(p_hat - p) < 3.0 * se);
}

TEST_CASE("a deadlocked model flags the trace and freezes measures") {
  auto [m, s] = stocs::testing::system_with({flag_component("put(<\"done\">)@self.nil")});
  SimOptions o = options_with(50.0, 3, {Measure::attr_of("flag", 0, "flag")}, 10.0);
  Trace t = simulate(m, s, Semantics::act_or, o);
  CHECK(t.deadlocked);
  CHECK(t.end_time < 50.0);
  REQUIRE(t.samples.size() == o.grid.size());
  for (std::size_t i = 1; i < t.samples.size(); ++i) CHECK(t.samples[i][0] == 1.0);
}

TEST_CASE("one replication reports its own samples with zero spread") {
  auto [m, s] = stocs::testing::system_with({flag_component("put(<\"done\">)@self.nil")});
  SimOptions o = options_with(2.0, 11, {Measure::attr_of("flag", 0, "flag")}, 0.5);
  auto summary = replicate(m, s, Semantics::act_or, o, 1, 1);
  SimOptions single = o;
  single.replication = 0;
  Trace t = simulate(m, s, Semantics::act_or, single);
  for (std::size_t gi = 0; gi < o.grid.size(); ++gi) {
    CHECK(summary.mean[0][gi] == t.samples[gi][0]);
    CHECK(summary.stddev[0][gi] == 0.0);
  }
}

TEST_CASE("the summary is independent of the parallelism degree") {
  auto [m, s] = stocs::testing::system_with(
      {flag_component("put(<\"done\">)@self.put(<\"done\">)@self.nil")});
  SimOptions o = options_with(3.0, 5, {Measure::attr_of("flag", 0, "flag")}, 0.5);
  auto seq = replicate(m, s, Semantics::act_or, o, 40, 1);
  auto par = replicate(m, s, Semantics::act_or, o, 40, 8);
  CHECK(summary_csv(seq) == summary_csv(par));
}

TEST_CASE("confidence intervals shrink like one over root n") {
  auto [m, s] = stocs::testing::system_with({flag_component("put(<\"done\">)@self.nil")});
  SimOptions o = options_with(1.0, 19, {Measure::attr_of("flag", 0, "flag")});
  auto small = replicate(m, s, Semantics::act_or, o, 100, 4);
  auto large = replicate(m, s, Semantics::act_or, o, 400, 4);
  double ratio = small.ci_half[0].back() / large.ci_half[0].back();
  CHECK(ratio > 1.4);
  CHECK(ratio < 2.9);
}

TEST_CASE("measure specs parse into evaluable measures") {
  auto [m, s] = stocs::testing::system_with(
      {flag_component("nil"), flag_component("nil")});
  Measure count = parse_measure_spec("all = count(where flag = 0)");
  CHECK(eval_measure(s, count) == 2.0);
  Measure attr = parse_measure_spec("f0 = attr(0, flag)");
  CHECK(eval_measure(s, attr) == 0.0);
  Measure mean = parse_measure_spec("avg = mean(flag)");
  CHECK(eval_measure(s, mean) == 0.0);
  CHECK_THROWS(parse_measure_spec("nonsense"));
  CHECK_THROWS(parse_measure_spec("x = tally(where flag = 0)"));
}

TEST_CASE("stddev and mean measures summarize attribute spreads") {
  std::vector<Component> comps;
  for (int b : {10, 0, 5, 5}) {
    Component c;
    c.name = "st";
    c.process = make_nil();
    AttributeRule r;
    r.kind = AttributeRule::Kind::constant;
    r.constant = num(b);
    c.interface.rules.emplace_back("bikes", r);
    AttributeRule kind;
    kind.kind = AttributeRule::Kind::constant;
    kind.constant = str("station");
    c.interface.rules.emplace_back("kind", kind);
    c.repository = tuple_space();
    comps.push_back(std::move(c));
  }
  auto [m, s] = stocs::testing::system_with(std::move(comps));
  Measure mean = parse_measure_spec("avg = mean(bikes where kind = \"station\")");
  Measure sd = parse_measure_spec("sd = stddev(bikes where kind = \"station\")");
  CHECK(eval_measure(s, mean) == doctest::Approx(5.0));
  // population stddev of (10, 0, 5, 5)
  CHECK(eval_measure(s, sd) == doctest::Approx(std::sqrt(12.5)));
}

TEST_CASE("counter rng streams are stable and well distributed") {
  CounterRng a(1, 2, 3);
  CounterRng b(1, 2, 3);
  for (int i = 0; i < 10; ++i) CHECK(a.next_u64() == b.next_u64());
  CounterRng c(1, 2, 4);
  CHECK(a.next_u64() != c.next_u64());

  double sum = 0.0;
  CounterRng d(123, 0, 0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) sum += d.next_unit();
  CHECK(std::abs(sum / n - 0.5) < 0.01);
}
