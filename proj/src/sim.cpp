#include "stocs/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "stocs/parser.hpp"

namespace stocs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t jump) {
  std::uint64_t k = seed;
  std::uint64_t a = splitmix64(k) ^ (replication * 0xd6e8feb86659fd93ull);
  std::uint64_t b = splitmix64(a) ^ (jump * 0xa2f79a1c6f2e3b25ull + 0x632be59bd9b4e019ull);
  state_ = b;
  (void)next_u64();  // decorrelate nearby keys
}

std::uint64_t CounterRng::next_u64() { return splitmix64(state_); }

double CounterRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::next_exponential(double rate) {
  double u = next_unit();
  return -std::log1p(-u) / rate;
}

// ---------------------------------------------------------------------------
// Measures
// ---------------------------------------------------------------------------

Measure Measure::count_of(std::string name, PredicateRef where) {
  Measure m;
  m.name = std::move(name);
  m.kind = Kind::count;
  m.where = std::move(where);
  return m;
}

Measure Measure::sum_of(std::string name, std::string attr, PredicateRef where) {
  Measure m = count_of(std::move(name), std::move(where));
  m.kind = Kind::sum;
  m.attr = std::move(attr);
  return m;
}

Measure Measure::mean_of(std::string name, std::string attr, PredicateRef where) {
  Measure m = sum_of(std::move(name), std::move(attr), std::move(where));
  m.kind = Kind::mean;
  return m;
}

Measure Measure::stddev_of(std::string name, std::string attr, PredicateRef where) {
  Measure m = sum_of(std::move(name), std::move(attr), std::move(where));
  m.kind = Kind::stddev;
  return m;
}

Measure Measure::attr_of(std::string name, std::size_t comp_index, std::string attr) {
  Measure m;
  m.name = std::move(name);
  m.kind = Kind::attr;
  m.comp_index = comp_index;
  m.attr = std::move(attr);
  return m;
}

double eval_measure(const SystemState& s, const Measure& m) {
  if (m.kind == Measure::Kind::attr) {
    if (m.comp_index >= s.comps.size()) return 0.0;
    auto it = s.comps[m.comp_index]->eval.find(m.attr);
    if (it == s.comps[m.comp_index]->eval.end()) return 0.0;
    auto n = numeric(it->second);
    return n ? *n : 0.0;
  }

  std::vector<double> values;
  std::size_t matched = 0;
  for (const auto& c : s.comps) {
    if (m.where && !satisfies(c->eval, m.where)) continue;
    ++matched;
    if (m.kind == Measure::Kind::count) continue;
    auto it = c->eval.find(m.attr);
    if (it == c->eval.end()) continue;
    auto n = numeric(it->second);
    if (n) values.push_back(*n);
  }
  switch (m.kind) {
    case Measure::Kind::count:
      return static_cast<double>(matched);
    case Measure::Kind::sum: {
      double s2 = 0.0;
      for (double v : values) s2 += v;
      return s2;
    }
    case Measure::Kind::mean: {
      if (values.empty()) return 0.0;
      double s2 = 0.0;
      for (double v : values) s2 += v;
      return s2 / static_cast<double>(values.size());
    }
    case Measure::Kind::stddev: {
      if (values.empty()) return 0.0;
      double mean = 0.0;
      for (double v : values) mean += v;
      mean /= static_cast<double>(values.size());
      double ss = 0.0;
      for (double v : values) ss += (v - mean) * (v - mean);
      return std::sqrt(ss / static_cast<double>(values.size()));
    }
    default:
      return 0.0;
  }
}

Measure parse_measure_spec(const std::string& spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos)
    throw std::invalid_argument("measure spec needs the form name = kind(...): " + spec);
  auto trim = [](std::string s) {
    std::size_t b = s.find_first_not_of(" \t");
    std::size_t e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  std::string name = trim(spec.substr(0, eq));
  std::string rhs = trim(spec.substr(eq + 1));
  auto open = rhs.find('(');
  if (open == std::string::npos || rhs.back() != ')')
    throw std::invalid_argument("measure spec needs the form name = kind(...): " + spec);
  std::string kind = trim(rhs.substr(0, open));
  std::string body = trim(rhs.substr(open + 1, rhs.size() - open - 2));

  auto split_where = [&](const std::string& text) -> std::pair<std::string, PredicateRef> {
    auto pos = text.find("where");
    if (pos == std::string::npos) return {trim(text), nullptr};
    std::string head = trim(text.substr(0, pos));
    std::string pred = trim(text.substr(pos + 5));
    return {head, parse_predicate_text(pred)};
  };

  if (kind == "count") {
    auto [head, where] = split_where(body);
    if (!head.empty()) throw std::invalid_argument("count takes only a where clause: " + spec);
    return Measure::count_of(name, where);
  }
  if (kind == "sum" || kind == "mean" || kind == "stddev") {
    auto [attr, where] = split_where(body);
    if (attr.empty()) throw std::invalid_argument("missing attribute in measure: " + spec);
    if (kind == "sum") return Measure::sum_of(name, attr, where);
    if (kind == "mean") return Measure::mean_of(name, attr, where);
    return Measure::stddev_of(name, attr, where);
  }
  if (kind == "attr") {
    auto comma = body.find(',');
    if (comma == std::string::npos)
      throw std::invalid_argument("attr measure needs attr(index, name): " + spec);
    std::size_t index = std::stoul(trim(body.substr(0, comma)));
    std::string attr = trim(body.substr(comma + 1));
    return Measure::attr_of(name, index, attr);
  }
  throw std::invalid_argument("unknown measure kind '" + kind + "'");
}

// ---------------------------------------------------------------------------
// SSA
// ---------------------------------------------------------------------------

std::vector<double> make_grid(double t_end, double step) {
  if (step <= 0.0) throw std::invalid_argument("grid step must be positive");
  std::vector<double> grid;
  for (double t = 0.0; t <= t_end + 1e-12; t += step) grid.push_back(std::min(t, t_end));
  return grid;
}

Trace simulate(const Model& model, const SystemState& initial, Semantics sem,
               const SimOptions& options, const JumpObserver* observer) {
  if (!(options.t_end > 0.0)) throw std::invalid_argument("t_end must be positive");
  Trace trace;
  trace.seed = options.seed;

  SystemState state = initial;
  double t = 0.0;
  std::size_t grid_index = 0;

  auto sample_state = [&](const SystemState& s) {
    std::vector<double> row;
    row.reserve(options.measures.size());
    for (const auto& m : options.measures) row.push_back(eval_measure(s, m));
    return row;
  };
  auto record_state = [&](const SystemState& s) {
    if (!options.record_jumps) return std::size_t{0};
    trace.jump_state_keys.push_back(s.key());
    return trace.jump_state_keys.size() - 1;
  };

  if (options.record_jumps) trace.jumps.emplace_back(0.0, record_state(state));

  for (;;) {
    auto transitions = enabled_transitions(model, state, sem);
    if (transitions.empty()) {
      trace.deadlocked = true;
      break;
    }
    double exit_rate = 0.0;
    for (const auto& tr : transitions) exit_rate += tr.continuation.total_mass();

    CounterRng rng(options.seed, options.replication, trace.jump_count);
    double dt = rng.next_exponential(exit_rate);
    double t_next = t + dt;

    while (grid_index < options.grid.size() && options.grid[grid_index] < t_next) {
      if (options.grid[grid_index] > options.t_end) break;
      trace.samples.push_back(sample_state(state));
      ++grid_index;
    }
    if (t_next >= options.t_end) {
      t = options.t_end;
      break;
    }

    // pick the transition proportionally to its mass, then the successor
    double pick = rng.next_unit() * exit_rate;
    const EnabledTransition* chosen = &transitions.back();
    for (const auto& tr : transitions) {
      double m = tr.continuation.total_mass();
      if (pick < m) {
        chosen = &tr;
        break;
      }
      pick -= m;
    }
    double total = chosen->continuation.total_mass();
    double pick2 = rng.next_unit() * total;
    const SystemState* succ = nullptr;
    for (const auto& [s, mass] : chosen->continuation.entries()) {
      if (pick2 < mass) {
        succ = &s;
        break;
      }
      pick2 -= mass;
    }
    if (!succ) succ = &chosen->continuation.entries().rbegin()->first;

    state = *succ;
    t = t_next;
    ++trace.jump_count;
    if (options.record_jumps) trace.jumps.emplace_back(t, record_state(state));
    if (observer) (*observer)(t, state);
  }

  // remaining grid points see the final (possibly deadlocked) state
  while (grid_index < options.grid.size()) {
    trace.samples.push_back(sample_state(state));
    ++grid_index;
  }
  trace.end_time = t;
  return trace;
}

// ---------------------------------------------------------------------------
// Replications
// ---------------------------------------------------------------------------

std::vector<std::vector<std::vector<double>>> replicate_samples(
    const Model& model, const SystemState& initial, Semantics sem, const SimOptions& options,
    std::size_t n_reps, std::size_t parallelism) {
  if (n_reps < 1) throw std::invalid_argument("need at least one replication");
  parallelism = std::max<std::size_t>(1, std::min(parallelism, n_reps));

  std::vector<std::vector<std::vector<double>>> samples(n_reps);
  auto worker = [&](std::size_t worker_index) {
    for (std::size_t r = worker_index; r < n_reps; r += parallelism) {
      SimOptions local = options;
      local.replication = r;
      local.record_jumps = false;
      samples[r] = simulate(model, initial, sem, local).samples;
    }
  };
  if (parallelism == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(parallelism);
    for (std::size_t w = 0; w < parallelism; ++w) threads.emplace_back(worker, w);
    for (auto& th : threads) th.join();
  }
  return samples;
}

ReplicationSummary replicate(const Model& model, const SystemState& initial, Semantics sem,
                             const SimOptions& options, std::size_t n_reps,
                             std::size_t parallelism) {
  if (n_reps < 1) throw std::invalid_argument("need at least one replication");
  parallelism = std::max<std::size_t>(1, std::min(parallelism, n_reps));

  std::vector<std::vector<std::vector<double>>> samples(n_reps);
  std::vector<char> dead(n_reps, 0);
  auto worker = [&](std::size_t worker_index) {
    for (std::size_t r = worker_index; r < n_reps; r += parallelism) {
      SimOptions local = options;
      local.replication = r;
      local.record_jumps = false;
      Trace tr = simulate(model, initial, sem, local);
      samples[r] = std::move(tr.samples);
      dead[r] = tr.deadlocked ? 1 : 0;
    }
  };
  if (parallelism == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(parallelism);
    for (std::size_t w = 0; w < parallelism; ++w) threads.emplace_back(worker, w);
    for (auto& th : threads) th.join();
  }

  ReplicationSummary out;
  for (char d : dead) out.deadlocks += d;
  out.grid = options.grid;
  out.replications = n_reps;
  for (const auto& m : options.measures) out.measure_names.push_back(m.name);

  const std::size_t n_measures = options.measures.size();
  const std::size_t n_grid = options.grid.size();
  out.mean.assign(n_measures, std::vector<double>(n_grid, 0.0));
  out.stddev.assign(n_measures, std::vector<double>(n_grid, 0.0));
  out.ci_half.assign(n_measures, std::vector<double>(n_grid, 0.0));

  for (std::size_t mi = 0; mi < n_measures; ++mi) {
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
      double mean = 0.0;
      for (std::size_t r = 0; r < n_reps; ++r) mean += samples[r][gi][mi];
      mean /= static_cast<double>(n_reps);
      double ss = 0.0;
      for (std::size_t r = 0; r < n_reps; ++r) {
        double d = samples[r][gi][mi] - mean;
        ss += d * d;
      }
      double sd = n_reps > 1 ? std::sqrt(ss / static_cast<double>(n_reps - 1)) : 0.0;
      out.mean[mi][gi] = mean;
      out.stddev[mi][gi] = sd;
      out.ci_half[mi][gi] = n_reps > 1 ? 1.96 * sd / std::sqrt(static_cast<double>(n_reps)) : 0.0;
    }
  }
  return out;
}

}  // namespace stocs
