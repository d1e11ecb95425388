#pragma once

#include <optional>
#include <string_view>
#include <vector>

// Preset scenarios compiled into the binary from presets/*.json.

namespace rydcp::cli {

struct Preset {
    std::string_view name;
    std::string_view json;
};

[[nodiscard]] const std::vector<Preset>& presets();

[[nodiscard]] std::optional<std::string_view> find_preset(std::string_view name);

} // namespace rydcp::cli
