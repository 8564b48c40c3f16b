#pragma once

#include <string>

#include "fsgcc/roomsim.hpp"

namespace fsgcc {

/// Parse the key-value scene schema (see README). Lines are `key = value`;
/// `#` starts a comment; `mic` may repeat. Throws on unknown keys or
/// malformed values.
SimScene parse_scene_text(const std::string& text);

SimScene parse_scene_file(const std::string& path);

/// Canonical text form of a scene; parse_scene_text round-trips it.
std::string scene_to_text(const SimScene& scene);

}  // namespace fsgcc
