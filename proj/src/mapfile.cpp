#include "pcim/mapfile.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "pcim/errors.hpp"

namespace pcim {

namespace {

struct Cursor {
  std::string_view text;
  std::size_t pos = 0;
  std::string where;  // "origin:line"

  [[noreturn]] void fail(const std::string& field, const std::string& message) const {
    raise(Errc::SyntaxError, where + ": " + field + ": " + message);
  }

  void skip_ws() {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  }

  bool try_consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c, const std::string& field) {
    if (!try_consume(c))
      fail(field, std::string("expected '") + c + "'");
  }

  std::string parse_string(const std::string& field) {
    expect('"', field);
    std::string out;
    while (pos < text.size() && text[pos] != '"') {
      if (text[pos] == '\\' || text[pos] == '\n')
        fail(field, "unsupported character in string");
      out += text[pos++];
    }
    if (pos == text.size()) fail(field, "unterminated string");
    ++pos;
    return out;
  }

  bool parse_bool(const std::string& field) {
    skip_ws();
    if (text.substr(pos, 4) == "true") {
      pos += 4;
      return true;
    }
    if (text.substr(pos, 5) == "false") {
      pos += 5;
      return false;
    }
    fail(field, "expected true or false");
  }

  void expect_end(const std::string& field) {
    skip_ws();
    if (pos != text.size()) fail(field, "trailing characters");
  }
};

std::vector<std::string> parse_string_array(Cursor& cur, const std::string& field) {
  std::vector<std::string> items;
  cur.expect('[', field);
  if (cur.try_consume(']')) return items;
  while (true) {
    items.push_back(cur.parse_string(field + "[" + std::to_string(items.size()) + "]"));
    if (cur.try_consume(']')) break;
    cur.expect(',', field);
  }
  return items;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_name(const std::string& name) {
  if (name.empty()) return false;
  for (char c : name)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '.' && c != '-')
      return false;
  return true;
}

}  // namespace

PCIMDefinition parse_map_text(const std::string& text, const std::string& origin) {
  PCIMDefinition def;
  bool saw_domain = false, saw_cuts = false, saw_branches = false, saw_open = false,
       saw_name = false;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::string where = origin + ":" + std::to_string(line_no);

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      raise(Errc::SyntaxError, where + ": expected `key = value`");
    const std::string key = trim(line.substr(0, eq));
    Cursor cur{std::string_view(line).substr(eq + 1), 0, where};

    if (key == "name") {
      if (saw_name) cur.fail(key, "duplicate key");
      def.name = cur.parse_string(key);
      if (!valid_name(def.name))
        cur.fail(key, "names are restricted to [A-Za-z0-9_.-]");
      cur.expect_end(key);
      saw_name = true;
    } else if (key == "domain") {
      if (saw_domain) cur.fail(key, "duplicate key");
      auto items = parse_string_array(cur, key);
      cur.expect_end(key);
      if (items.size() != 2) cur.fail(key, "expected exactly two endpoints");
      Rational lo = parse_rational(items[0], where + ": domain[0]");
      Rational hi = parse_rational(items[1], where + ": domain[1]");
      if (lo > hi) cur.fail(key, "left endpoint exceeds right endpoint");
      def.domain = ClosedInterval(std::move(lo), std::move(hi));
      saw_domain = true;
    } else if (key == "cuts") {
      if (saw_cuts) cur.fail(key, "duplicate key");
      auto items = parse_string_array(cur, key);
      cur.expect_end(key);
      for (std::size_t k = 0; k < items.size(); ++k)
        def.cut_points.push_back(
            parse_rational(items[k], where + ": cuts[" + std::to_string(k) + "]"));
      saw_cuts = true;
    } else if (key == "branches") {
      if (saw_branches) cur.fail(key, "duplicate key");
      cur.expect('[', key);
      if (!cur.try_consume(']')) {
        while (true) {
          const std::string field =
              "branches[" + std::to_string(def.branches.size()) + "]";
          cur.expect('{', field);
          cur.skip_ws();
          if (cur.text.substr(cur.pos, 1) != "a") cur.fail(field, "expected `a = ...`");
          ++cur.pos;
          cur.expect('=', field);
          Rational a = parse_rational(cur.parse_string(field + ".a"),
                                      cur.where + ": " + field + ".a");
          cur.expect(',', field);
          cur.skip_ws();
          if (cur.text.substr(cur.pos, 1) != "b") cur.fail(field, "expected `b = ...`");
          ++cur.pos;
          cur.expect('=', field);
          Rational b = parse_rational(cur.parse_string(field + ".b"),
                                      cur.where + ": " + field + ".b");
          cur.expect('}', field);
          def.branches.push_back(AffineBranch{std::move(a), std::move(b)});
          if (cur.try_consume(']')) break;
          cur.expect(',', key);
        }
      }
      cur.expect_end(key);
      saw_branches = true;
    } else if (key == "open_ends") {
      if (saw_open) cur.fail(key, "duplicate key");
      cur.expect('[', key);
      def.open_ends[0] = cur.parse_bool(key + "[0]");
      cur.expect(',', key);
      def.open_ends[1] = cur.parse_bool(key + "[1]");
      cur.expect(']', key);
      cur.expect_end(key);
      saw_open = true;
    } else {
      cur.fail(key, "unknown key");
    }
  }

  if (!saw_domain || !saw_cuts || !saw_branches)
    raise(Errc::SyntaxError,
          origin + ": missing required key(s): a map definition needs domain, cuts and "
                   "branches");

  try {
    validate_pcim(def);
  } catch (const PcimError& e) {
    raise(Errc::ValidationError, origin + ": " + e.what());
  }
  return def;
}

PCIMDefinition parse_map_file(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    raise(Errc::SyntaxError, path + ": cannot read map definition file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_map_text(buffer.str(), path);
}

std::string serialize_definition(const PCIMDefinition& def) {
  std::string out;
  if (!def.name.empty()) out += "name = \"" + def.name + "\"\n";
  out += "domain = [\"" + to_string(def.domain.lo) + "\", \"" + to_string(def.domain.hi) +
         "\"]\n";
  out += "cuts = [";
  for (std::size_t k = 0; k < def.cut_points.size(); ++k) {
    if (k > 0) out += ", ";
    out += "\"" + to_string(def.cut_points[k]) + "\"";
  }
  out += "]\n";
  out += "branches = [";
  for (std::size_t k = 0; k < def.branches.size(); ++k) {
    if (k > 0) out += ", ";
    out += "{a = \"" + to_string(def.branches[k].slope) + "\", b = \"" +
           to_string(def.branches[k].intercept) + "\"}";
  }
  out += "]\n";
  out += std::string("open_ends = [") + (def.open_ends[0] ? "true" : "false") + ", " +
         (def.open_ends[1] ? "true" : "false") + "]\n";
  return out;
}

}  // namespace pcim
