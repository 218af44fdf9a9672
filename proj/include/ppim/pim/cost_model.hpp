#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include "ppim/error.hpp"

namespace ppim::pim {

/// Analytic cost model for host<->DPU traffic and per-element work.
///
/// Bandwidths are per DPU link: a scatter to N DPUs finishes when the
/// slowest link does. The defaults are the shipped calibration (see
/// configs/upmem_calibrated.cfg): at 64 DPUs x 16 tasklets and 2^24-element
/// vector addition, host->DPU takes ~51% and DPU->host ~45% of the run.
struct CostModel {
  double host_to_dpu_bw = 6.0e6;    // bytes / s
  double dpu_to_host_bw = 3.4e6;    // bytes / s
  double transfer_latency = 5.0e-5; // s per copy operation
  double dpu_op_time = 1.67e-6;     // s per element op on one tasklet
  double cpu_op_time = 1.0e-9;      // s per element op on the host

  void validate() const {
    auto check = [](double v, const char* name) {
      if (!(v > 0.0) || !std::isfinite(v))
        fail(ErrorCode::invalid_argument, std::string("cost model field '") + name + "' must be positive");
    };
    check(host_to_dpu_bw, "host_to_dpu_bw");
    check(dpu_to_host_bw, "dpu_to_host_bw");
    check(transfer_latency, "transfer_latency");
    check(dpu_op_time, "dpu_op_time");
    check(cpu_op_time, "cpu_op_time");
  }

  bool operator==(const CostModel&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace detail

/// Parses `key=value` lines. Blank lines and `#` comments are ignored;
/// keys missing from the text keep their default value.
inline CostModel parse_cost_model(const std::string& text) {
  CostModel cost;
  const std::map<std::string, double CostModel::*> fields = {
      {"host_to_dpu_bw", &CostModel::host_to_dpu_bw},
      {"dpu_to_host_bw", &CostModel::dpu_to_host_bw},
      {"transfer_latency", &CostModel::transfer_latency},
      {"dpu_op_time", &CostModel::dpu_op_time},
      {"cpu_op_time", &CostModel::cpu_op_time},
  };
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::config_invalid, "line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    const auto it = fields.find(key);
    if (it == fields.end()) fail(ErrorCode::config_invalid, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    double parsed = 0.0;
    const auto* end = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(value.data(), end, parsed);
    if (ec != std::errc() || ptr != end || value.empty())
      fail(ErrorCode::config_invalid, "line " + std::to_string(line_no) + ": bad number '" + value + "'");
    cost.*(it->second) = parsed;
  }
  cost.validate();
  return cost;
}

inline CostModel load_cost_model(const std::string& path) {
  std::ifstream file(path);
  if (!file) fail(ErrorCode::io_error, "cannot open cost config '" + path + "'");
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_cost_model(buf.str());
}

}  // namespace ppim::pim
