#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "lobsim/config.hpp"

namespace lobsim {

/// Parses the flat `key = value` config grammar:
///
///   # comment (also allowed after a value)
///   gamma = 0.0025
///   p_f = 20.0..25.0                 ranges are lo..hi
///   group = 4000,2000,750            slow,fast,count; repeatable
///   group = none                     no technical agents
///
/// Missing keys keep their defaults; any `group` line replaces the default
/// groups. Unknown or repeated keys, syntax errors and domain violations throw
/// ConfigError with the key and line number.
SimConfig parse_config_text(std::string_view text);

SimConfig parse_config(const std::filesystem::path& path);

/// Inverse of parse_config_text for every key (used to echo run settings).
std::string format_config(const SimConfig& config);

}  // namespace lobsim
