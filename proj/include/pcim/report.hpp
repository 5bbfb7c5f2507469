#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pcim {

// One run's output: meta (subcommand, effective config, canonical map
// text), scalar summary entries, and a rectangular table. Everything is a
// string so that CSV and JSON renderings are byte-deterministic.
struct Report {
  std::string tool = "pcim-lab";
  std::string subcommand;
  std::optional<std::string> timestamp;  // absent under --deterministic
  std::vector<std::pair<std::string, std::string>> config;
  std::string map_text;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const Report& report);
std::string to_json_text(const Report& report);

// CSV meta block without rows (streaming writers append rows themselves).
std::string csv_header(const Report& report);
std::string csv_row(const std::vector<std::string>& cells);

// What --replay needs to reproduce a run. Accepts a JSON report or a CSV
// report carrying the `# replay {...}` line.
struct ReplayInfo {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> config;
  std::string map_text;
};

ReplayInfo parse_replay(const std::string& report_text);

std::string format_double(double value);

}  // namespace pcim
