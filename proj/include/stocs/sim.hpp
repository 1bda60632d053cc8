#ifndef STOCS_SIM_HPP
#define STOCS_SIM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "stocs/semantics.hpp"

namespace stocs {

// ---------------------------------------------------------------------------
// Counter-based random numbers: every jump of every replication draws from
// its own splitmix64 stream keyed by (seed, replication, jump), so parallel
// replications reproduce exactly.
// ---------------------------------------------------------------------------

std::uint64_t splitmix64(std::uint64_t& state);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t replication, std::uint64_t jump);

  std::uint64_t next_u64();
  // uniform in [0, 1)
  double next_unit();
  // exponential with the given rate (rate > 0)
  double next_exponential(double rate);

 private:
  std::uint64_t state_;
};

// ---------------------------------------------------------------------------
// Measures over system states
// ---------------------------------------------------------------------------

struct Measure {
  enum class Kind { count, sum, mean, stddev, attr };

  std::string name;
  Kind kind = Kind::count;
  std::string attr;            // sum/mean/stddev/attr
  PredicateRef where;          // null = all components
  std::size_t comp_index = 0;  // attr

  static Measure count_of(std::string name, PredicateRef where);
  static Measure sum_of(std::string name, std::string attr, PredicateRef where);
  static Measure mean_of(std::string name, std::string attr, PredicateRef where);
  static Measure stddev_of(std::string name, std::string attr, PredicateRef where);
  static Measure attr_of(std::string name, std::size_t comp_index, std::string attr);
};

double eval_measure(const SystemState& s, const Measure& m);

// Parses "name = kind(attr where pred)" style specs, e.g.
//   walkers = count(where state = "p")
//   avg_bikes = mean(bikes where kind = "station")
//   here = attr(3, loc)
Measure parse_measure_spec(const std::string& spec);

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

struct SimOptions {
  double t_end = 10.0;
  std::uint64_t seed = 1;
  std::uint64_t replication = 0;
  std::vector<Measure> measures;
  std::vector<double> grid;  // ascending observation times
  bool record_jumps = false;
};

struct Trace {
  std::vector<std::vector<double>> samples;  // [grid index][measure index]
  std::vector<std::pair<double, std::size_t>> jumps;  // (time, local state id) if recorded
  std::vector<std::string> jump_state_keys;           // local id -> canonical key
  std::size_t jump_count = 0;
  double end_time = 0.0;
  bool deadlocked = false;
  std::uint64_t seed = 0;
};

// Called after each jump with the jump time and the state just entered.
using JumpObserver = std::function<void(double, const SystemState&)>;

// Samples the jump chain directly over enabled transitions; measures are
// sampled on the grid with the state holding at each grid time. Fully
// deterministic given (seed, replication).
Trace simulate(const Model& model, const SystemState& initial, Semantics sem,
               const SimOptions& options, const JumpObserver* observer = nullptr);

// Observation grid 0, step, 2*step, ..., t_end.
std::vector<double> make_grid(double t_end, double step);

struct ReplicationSummary {
  std::vector<double> grid;
  std::vector<std::string> measure_names;
  // [measure][grid point]
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> stddev;
  std::vector<std::vector<double>> ci_half;  // 95% normal CI half-width
  std::size_t replications = 0;
  std::size_t deadlocks = 0;
};

// Replication r uses (seed, r); the summary does not depend on the degree
// of parallelism.
ReplicationSummary replicate(const Model& model, const SystemState& initial, Semantics sem,
                             const SimOptions& options, std::size_t n_reps,
                             std::size_t parallelism);

// Per-replication sample matrix [rep][grid][measure], same seeding contract.
std::vector<std::vector<std::vector<double>>> replicate_samples(const Model& model,
                                                                const SystemState& initial,
                                                                Semantics sem,
                                                                const SimOptions& options,
                                                                std::size_t n_reps,
                                                                std::size_t parallelism);

}  // namespace stocs

#endif
