#ifndef STOCS_CTMC_HPP
#define STOCS_CTMC_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "stocs/semantics.hpp"

namespace stocs {

class StateOverflow : public std::runtime_error {
 public:
  StateOverflow(std::size_t limit, std::size_t reached)
      : std::runtime_error("state space exceeds " + std::to_string(limit) + " states (reached " +
                           std::to_string(reached) + " before stopping)"),
        limit(limit),
        reached(reached) {}

  std::size_t limit;
  std::size_t reached;
};

struct CtmcEdge {
  std::size_t target = 0;
  double rate = 0.0;
  std::string label;  // kept for inspection; rates from distinct labels into
                      // the same target stay on separate edges
};

// Explicit-state chain over canonical system states, numbered in BFS order.
struct Ctmc {
  std::vector<SystemState> states;
  std::vector<std::vector<CtmcEdge>> edges;
  std::vector<double> exit_rates;
  std::size_t initial = 0;
  std::unordered_map<std::string, std::size_t> index_by_key;

  std::size_t size() const { return states.size(); }
};

// Breadth-first closure from the initial state; throws StateOverflow when
// more than max_states states are discovered.
Ctmc build_ctmc(const Model& model, const SystemState& initial, Semantics sem,
                std::size_t max_states);

// Transient distribution at time t by uniformization; the truncation bound
// is chosen so the total truncation error stays below tol. Requires
// 0 < tol <= 1e-3 and t >= 0.
std::vector<double> transient(const Ctmc& chain, double t, double tol);

}  // namespace stocs

#endif
