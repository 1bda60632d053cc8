#ifndef STOCS_BIKESHARE_HPP
#define STOCS_BIKESHARE_HPP

#include <string>
#include <vector>

#include "stocs/model.hpp"
#include "stocs/parser.hpp"
#include "stocs/sim.hpp"

namespace stocs {

// Bike sharing scenario: n users cycling between pedestrian and biker over
// a grid of locations, one passive parking station per location. Users
// reserve a bike (or slot) at a station near them, travel there, and take
// (or leave) the bike; reservation rates either scale with availability or
// stay constant.
struct BikeShareConfig {
  enum class Mode { resource, constant };

  int rows = 4;
  int cols = 4;
  int users = 40;
  std::vector<int> user_locs;          // initial location per user; default round-robin
  std::vector<int> bikes, slots;       // per station; default 5 / 5
  std::vector<std::vector<double>> qp; // pedestrian movement, row-stochastic m x m
  std::vector<std::vector<double>> qb; // biker movement
  Mode mode = Mode::resource;

  // rate coefficients; the language leaves the rate function open, so these
  // are engine defaults, not fixed constants of the scenario
  double reserve_coeff = 0.5;
  double walk_rate = 1.0;
  double ride_rate = 2.0;
  double travel_rate = 3.0;
  double lookup_rate = 6.0;
  double flag_rate = 6.0;
  double pickup_rate = 4.0;
  double dropoff_rate = 4.0;

  int locations() const { return rows * cols; }
  // neighborhood: Manhattan distance <= 1, reflexive
  bool near(int a, int b) const;

  // fills defaults for empty fields and checks the invariants; returns an
  // error message on failure
  std::string normalize();
};

struct BikeShareModel {
  Model model;
  SystemState initial;
  std::vector<Measure> measures;
  std::string model_text;        // .stocs form for inspection
  std::string rate_config_text;  // JSON rate configuration
  std::vector<std::size_t> station_indices;
  std::vector<std::size_t> user_indices;
};

BikeShareModel generate_bikeshare(const BikeShareConfig& cfg);

// Reservation-action rate at a station: proportional to availability in
// resource mode, availability-gated constant otherwise.
double station_rate(BikeShareConfig::Mode mode, int availability, double coeff);

// per-station available bikes, their mean and their spread across stations
std::vector<Measure> imbalance_measures(const BikeShareConfig& cfg);

// Exact bike count for conservation checks: bikes docked or reserved at
// stations plus bikes held by users. A user holds a bike from the pickup
// transfer until the drop-off transfer; the state flag in the knowledge
// lags the transfer by one action, so the process head is consulted for
// users with a pending flag update.
std::int64_t total_bikes(const BikeShareModel& m, const SystemState& s);

}  // namespace stocs

#endif
