// presets.hpp — figure presets for `cpent reproduce <id>`

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "cpent/cli/output.hpp"

namespace cpent::cli {

struct PresetPanel {
    std::string name;
    std::variant<Table, SweepResult> data;
};

const std::vector<std::string>& preset_ids();

// Pure function of the id; throws ConfigError for an unknown id.
std::vector<PresetPanel> reproduce(const std::string& id, unsigned threads = 1);

} // namespace cpent::cli
