#pragma once

#include <string>

#include "pb/state.hpp"

namespace pb {

/// Self-describing state container: UTF-8 text header (magic, grid, optional
/// phase grid, one "field <name> <kind> <parity>" line per entry, "end"),
/// followed by the field arrays in schema order as little-endian float64.
void save_state(const std::string& path, const State& x);
State load_state(const std::string& path);

}  // namespace pb
