#include "stocs/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stocs {

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string summary_csv(const ReplicationSummary& summary) {
  std::ostringstream out;
  out << "time,measure,mean,stddev,ci_half,replications\n";
  for (std::size_t mi = 0; mi < summary.measure_names.size(); ++mi)
    for (std::size_t gi = 0; gi < summary.grid.size(); ++gi)
      out << csv_number(summary.grid[gi]) << ',' << summary.measure_names[mi] << ','
          << csv_number(summary.mean[mi][gi]) << ',' << csv_number(summary.stddev[mi][gi]) << ','
          << csv_number(summary.ci_half[mi][gi]) << ',' << summary.replications << '\n';
  return out.str();
}

std::string trace_csv(const std::vector<double>& grid, const std::vector<std::string>& names,
                      const std::vector<std::vector<double>>& samples) {
  std::ostringstream out;
  out << "time";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  for (std::size_t gi = 0; gi < grid.size() && gi < samples.size(); ++gi) {
    out << csv_number(grid[gi]);
    for (double v : samples[gi]) out << ',' << csv_number(v);
    out << '\n';
  }
  return out.str();
}

namespace {

std::string csv_escape(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string states_csv(const Ctmc& chain) {
  std::ostringstream out;
  out << "state,target,rate,label,state_summary\n";
  for (std::size_t i = 0; i < chain.size(); ++i) {
    if (chain.edges[i].empty()) {
      out << i << ",,,," << csv_escape(chain.states[i].describe()) << '\n';
      continue;
    }
    for (const auto& e : chain.edges[i])
      out << i << ',' << e.target << ',' << csv_number(e.rate) << ',' << csv_escape(e.label) << ','
          << csv_escape(chain.states[i].describe()) << '\n';
  }
  return out.str();
}

std::string transient_csv(const Ctmc& chain, const std::vector<double>& probabilities) {
  std::ostringstream out;
  out << "state,probability,state_summary\n";
  for (std::size_t i = 0; i < chain.size(); ++i)
    out << i << ',' << csv_number(probabilities[i]) << ','
        << csv_escape(chain.states[i].describe()) << '\n';
  return out.str();
}

std::string manifest_json(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["model_hash"] = m.model_hash;
  j["config_hash"] = m.config_hash;
  j["semantics"] = m.semantics;
  j["seed"] = m.seed;
  j["started_at"] = m.started_at;
  j["tool_version"] = m.tool_version;
  for (const auto& [k, v] : m.extra) j[k] = v;
  return j.dump(2) + "\n";
}

std::string hash_hex(const std::string& content) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(content)));
  return buf;
}

std::string timestamp_now() {
  std::time_t now = std::time(nullptr);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace stocs
