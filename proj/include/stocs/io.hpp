#ifndef STOCS_IO_HPP
#define STOCS_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stocs/ctmc.hpp"
#include "stocs/sim.hpp"

namespace stocs {

inline constexpr const char* kToolVersion = "0.1.0";

// fixed-precision numeric formatting so equal runs produce identical bytes
std::string csv_number(double v);

std::string summary_csv(const ReplicationSummary& summary);
std::string trace_csv(const std::vector<double>& grid, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& samples);
std::string states_csv(const Ctmc& chain);
std::string transient_csv(const Ctmc& chain, const std::vector<double>& probabilities);

// Run metadata emitted alongside every output artifact.
struct RunManifest {
  std::string command;
  std::string model_hash;
  std::string config_hash;
  std::string semantics;
  std::uint64_t seed = 0;
  std::string started_at;
  std::string tool_version = kToolVersion;
  std::vector<std::pair<std::string, std::string>> extra;
};

std::string manifest_json(const RunManifest& m);

std::string hash_hex(const std::string& content);
std::string timestamp_now();

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace stocs

#endif
