// JSON emission with fixed 17-significant-digit floats.
#pragma once

#include <string>

#include <json.hpp>

namespace wm {

// Deterministic text: ordered keys as inserted, two-space indent, doubles
// as %.17g (non-finite values become null).
std::string dump_json(const nlohmann::ordered_json& j);
void write_json(const std::string& path, const nlohmann::ordered_json& j);

// git-describe string baked in at configure time
const char* version_string();

}  // namespace wm
