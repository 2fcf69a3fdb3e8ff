#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "haptofv/monitors.hpp"
#include "haptofv/state.hpp"

namespace haptofv {

// Monitor series CSV: fixed header, one row per report, 17 significant
// digits (decimal round-trip exact).
void write_series(const std::vector<MonitorReport>& reports, const std::string& path);
std::string series_header();
std::string series_row(const MonitorReport& r);

// Self-describing single-state snapshot. ".csv" selects text mode
// (17-digit decimals); any other extension writes raw little-endian
// 64-bit floats. Raw round trips are bit-exact.
void write_snapshot(const State& s, const std::string& path);
State read_snapshot(const std::string& path);

struct Checkpoint {
  std::uint64_t config_hash = 0;
  State state;
  MonitorState monitor;
};

void write_checkpoint(const Checkpoint& c, const std::string& path);
Checkpoint read_checkpoint(const std::string& path);

} // namespace haptofv
