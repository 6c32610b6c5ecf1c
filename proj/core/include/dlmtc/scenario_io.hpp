#pragma once

// JSON (de)serialization for Scenario. Field names follow the struct fields;
// doubles are written with round-trip precision so load(save(s)) == s.

#include <filesystem>
#include <string>
#include <string_view>

#include "dlmtc/model.hpp"

namespace dlmtc {

std::string scenario_to_json(const Scenario& scenario, int indent = 2);
Scenario scenario_from_json(std::string_view text);

void save_scenario(const Scenario& scenario, const std::filesystem::path& path);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace dlmtc
