#include "pcim/report.hpp"

#include <cstdio>

#include <json.hpp>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

using OrderedJson = nlohmann::ordered_json;

OrderedJson replay_payload(const Report& report) {
  OrderedJson config = OrderedJson::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  OrderedJson payload = OrderedJson::object();
  payload["subcommand"] = report.subcommand;
  payload["config"] = std::move(config);
  payload["map"] = report.map_text;
  return payload;
}

// cells with commas, quotes or newlines get quoted; everything the engine
// emits (rationals, words, doubles) is plain
std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string csv_header(const Report& report) {
  std::string out;
  out += "# " + report.tool + " report\n";
  out += "# subcommand = " + report.subcommand + "\n";
  if (report.timestamp) out += "# timestamp = " + *report.timestamp + "\n";
  for (const auto& [key, value] : report.config)
    out += "# config " + key + " = " + value + "\n";
  for (const auto& [key, value] : report.summary)
    out += "# summary " + key + " = " + value + "\n";
  out += "# replay " + replay_payload(report).dump() + "\n";
  for (std::size_t k = 0; k < report.columns.size(); ++k) {
    if (k > 0) out += ",";
    out += csv_escape(report.columns[k]);
  }
  out += "\n";
  return out;
}

std::string csv_row(const std::vector<std::string>& cells) {
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k > 0) out += ",";
    out += csv_escape(cells[k]);
  }
  out += "\n";
  return out;
}

std::string to_csv(const Report& report) {
  std::string out = csv_header(report);
  for (const auto& row : report.rows) out += csv_row(row);
  return out;
}

std::string to_json_text(const Report& report) {
  OrderedJson doc = OrderedJson::object();
  doc["tool"] = report.tool;
  doc["subcommand"] = report.subcommand;
  if (report.timestamp) doc["timestamp"] = *report.timestamp;
  OrderedJson config = OrderedJson::object();
  for (const auto& [key, value] : report.config) config[key] = value;
  doc["config"] = std::move(config);
  doc["map"] = report.map_text;
  OrderedJson summary = OrderedJson::object();
  for (const auto& [key, value] : report.summary) summary[key] = value;
  doc["summary"] = std::move(summary);
  doc["columns"] = report.columns;
  doc["rows"] = report.rows;
  return doc.dump(2) + "\n";
}

ReplayInfo parse_replay(const std::string& report_text) {
  std::string payload_text;
  std::size_t pos = report_text.find_first_not_of(" \t\r\n");
  if (pos != std::string::npos && report_text[pos] == '{') {
    payload_text = report_text;
  } else {
    const std::string marker = "# replay ";
    const auto at = report_text.find(marker);
    if (at == std::string::npos)
      raise(Errc::SyntaxError, "replay: no `# replay` line and not a JSON report");
    const auto end = report_text.find('\n', at);
    payload_text = report_text.substr(at + marker.size(),
                                      end == std::string::npos ? std::string::npos
                                                               : end - at - marker.size());
  }

  OrderedJson doc = OrderedJson::parse(payload_text, nullptr, false);
  if (doc.is_discarded())
    raise(Errc::SyntaxError, "replay: report does not contain valid JSON");

  ReplayInfo info;
  try {
    info.subcommand = doc.at("subcommand").get<std::string>();
    info.map_text = doc.at("map").get<std::string>();
    for (const auto& [key, value] : doc.at("config").items())
      info.config.emplace_back(key, value.get<std::string>());
  } catch (const OrderedJson::exception& e) {
    raise(Errc::SyntaxError, std::string("replay: malformed report: ") + e.what());
  }
  return info;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.15g", value);
  return buffer;
}

}  // namespace pcim
