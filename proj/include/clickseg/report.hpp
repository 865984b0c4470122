#pragma once

#include <clickseg/metrics.hpp>

#include <json.hpp>

#include <string>
#include <vector>

namespace clickseg::report {

/// Report fields in emission order, shared by the JSON and CSV writers.
const std::vector<std::string>& field_names();

nlohmann::ordered_json to_json(const EvalReport& report);

/// {"images": [...], "micro": {...}}; `names` labels the per-image entries.
nlohmann::ordered_json to_json(const SetReport& set,
                               const std::vector<std::string>& names);

/// Comma-separated table with a header row, one row per image, then "micro".
std::string to_csv(const SetReport& set, const std::vector<std::string>& names);

}  // namespace clickseg::report
