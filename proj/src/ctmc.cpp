#include "stocs/ctmc.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace stocs {

Ctmc build_ctmc(const Model& model, const SystemState& initial, Semantics sem,
                std::size_t max_states) {
  if (max_states < 1) throw std::invalid_argument("max_states must be at least 1");
  Ctmc chain;
  std::deque<std::size_t> frontier;

  auto intern = [&](const SystemState& s) -> std::size_t {
    std::string key = s.key();
    auto it = chain.index_by_key.find(key);
    if (it != chain.index_by_key.end()) return it->second;
    if (chain.states.size() >= max_states)
      throw StateOverflow(max_states, chain.states.size() + 1);
    std::size_t index = chain.states.size();
    chain.states.push_back(s);
    chain.index_by_key.emplace(std::move(key), index);
    frontier.push_back(index);
    return index;
  };

  chain.initial = intern(initial);
  while (!frontier.empty()) {
    std::size_t index = frontier.front();
    frontier.pop_front();
    auto transitions = enabled_transitions(model, chain.states[index], sem);
    std::vector<CtmcEdge> edges;
    double exit = 0.0;
    for (const auto& tr : transitions) {
      for (const auto& [succ, rate] : tr.continuation.entries()) {
        std::size_t target = intern(succ);
        edges.push_back(CtmcEdge{target, rate, tr.label.key});
        exit += rate;
      }
    }
    if (chain.edges.size() <= index) chain.edges.resize(index + 1);
    if (chain.exit_rates.size() <= index) chain.exit_rates.resize(index + 1);
    chain.edges[index] = std::move(edges);
    chain.exit_rates[index] = exit;
  }
  chain.edges.resize(chain.states.size());
  chain.exit_rates.resize(chain.states.size());
  return chain;
}

std::vector<double> transient(const Ctmc& chain, double t, double tol) {
  if (t < 0.0) throw std::invalid_argument("transient time must be non-negative");
  if (!(tol > 0.0) || tol > 1e-3) throw std::invalid_argument("tolerance must be in (0, 1e-3]");

  std::vector<double> p(chain.size(), 0.0);
  p[chain.initial] = 1.0;
  if (t == 0.0 || chain.size() == 0) return p;

  double max_exit = 0.0;
  for (double e : chain.exit_rates) max_exit = std::max(max_exit, e);
  if (max_exit == 0.0) return p;  // fully absorbing

  // headroom over the maximum exit rate avoids self-loop-free rows
  const double uni_rate = 1.05 * max_exit;
  const double q = uni_rate * t;

  // Poisson weights computed from the mode outward and normalized; this
  // avoids underflow for large q. The per-term cutoff bounds the truncated
  // tail mass well below tol because the terms decay geometrically.
  const double term_cutoff = tol * 1e-3;
  const std::size_t mode = static_cast<std::size_t>(std::floor(q));
  std::vector<double> up{1.0};  // weights for k = mode, mode+1, ...
  for (double w = 1.0; up.size() < 4000000;) {
    std::size_t k = mode + up.size();
    w *= q / static_cast<double>(k);
    up.push_back(w);
    if (w < term_cutoff && static_cast<double>(k) > q) break;
  }
  std::vector<double> down;  // weights for k = mode-1 .. lo
  if (mode > 0) {
    double w = 1.0;
    for (std::size_t k = mode; k-- > 0;) {
      w *= static_cast<double>(k + 1) / q;
      down.push_back(w);
      if (w < term_cutoff) break;
    }
  }
  double total = 0.0;
  for (double w : up) total += w;
  for (double w : down) total += w;

  const std::size_t lo = mode - down.size();
  const std::size_t hi = mode + up.size() - 1;
  std::vector<double> weights(hi - lo + 1, 0.0);
  for (std::size_t k = lo; k < mode; ++k) weights[k - lo] = down[mode - 1 - k] / total;
  for (std::size_t k = mode; k <= hi; ++k) weights[k - lo] = up[k - mode] / total;

  // iterate pi_{k+1} = pi_k * U with U = I + Q/uni_rate, accumulating the
  // weighted sum
  std::vector<double> result(chain.size(), 0.0);
  std::vector<double> cur = p;
  std::vector<double> next(chain.size(), 0.0);
  for (std::size_t k = 0; k <= hi; ++k) {
    if (k >= lo) {
      double w = weights[k - lo];
      for (std::size_t i = 0; i < chain.size(); ++i) result[i] += w * cur[i];
    }
    if (k == hi) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t i = 0; i < chain.size(); ++i) {
      double pi = cur[i];
      if (pi == 0.0) continue;
      next[i] += pi * (1.0 - chain.exit_rates[i] / uni_rate);
      for (const auto& e : chain.edges[i]) next[e.target] += pi * (e.rate / uni_rate);
    }
    cur.swap(next);
  }
  return result;
}

}  // namespace stocs
