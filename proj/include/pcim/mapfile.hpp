#pragma once

#include <string>

#include "pcim/map.hpp"

namespace pcim {

// Map definition document: one `key = value` pair per line, string values
// in double quotes, rationals in canonical "p/q" form. Example:
//
//   name = "e2"
//   domain = ["0", "1"]
//   cuts = ["1/2"]
//   branches = [{a = "1/2", b = "1/2"}, {a = "1/3", b = "0"}]
//   open_ends = [false, false]
//
// Lines starting with '#' are comments. The parser validates the parsed
// definition (delegation to validate_pcim surfaces as ValidationError) and
// serializing the result reproduces the canonical form.
PCIMDefinition parse_map_text(const std::string& text,
                              const std::string& origin = "<input>");
PCIMDefinition parse_map_file(const std::string& path);

std::string serialize_definition(const PCIMDefinition& def);

}  // namespace pcim
