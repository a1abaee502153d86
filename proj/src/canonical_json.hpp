#pragma once

#include <string>

#include <json.hpp>

namespace nnmbfl::detail {

// Deterministic rendering: keys in insertion order, floats with 17
// significant digits, scalar-only arrays on one line. Throws IoError on
// non-finite numbers, which JSON cannot carry.
std::string canonical_json(const nlohmann::ordered_json& value);

}  // namespace nnmbfl::detail
