#pragma once

// JSON forms of mappings and reports.
//
// Mapping schema:
//   {"n": 2, "components": [{"terms": [{"re": 1, "im": 0, "freq": ["1", "1/2"]}]}]}
// Frequencies are strings "p" or "p/q"; unknown keys are rejected.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "expamoeba/convexity.hpp"
#include "expamoeba/regularity.hpp"

namespace expamoeba {

using Json = nlohmann::ordered_json;

Json to_json(const ExpMapping& f);
ExpMapping mapping_from_json(const Json& j);

/// Parses mapping text; syntax errors are reported as InputError with
/// line and column.
ExpMapping parse_mapping(std::string_view text);
ExpMapping read_mapping_file(const std::string& path);

Json to_json(const Face& f);
Json to_json(const FaceDecomposition& d);
Json to_json(const RegularityReport& r);
Json to_json(const std::vector<ComponentReport>& comps);

/// The worked mappings shipped with the tool, by fixture name:
/// F_sec61, G_eq36, H_sec61, pair_rem64, line.
std::vector<std::pair<std::string, ExpMapping>> bundled_fixtures();
ExpMapping bundled_fixture(const std::string& name);

}  // namespace expamoeba
