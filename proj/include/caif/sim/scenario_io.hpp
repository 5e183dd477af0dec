#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "caif/sim/types.hpp"

namespace caif::sim {

// Raised for unreadable scenario files. The message names the line (syntax
// errors) or the field path (schema errors).
class ScenarioParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);
nlohmann::json scenario_to_json(const Scenario& scenario);

}  // namespace caif::sim
