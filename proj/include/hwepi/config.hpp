#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hwepi/model.hpp"

namespace hwepi {

/// Model parameters plus the optional seed read from a flat key=value file.
struct Config {
    ModelParams params;
    std::optional<std::uint64_t> seed;
};

/// Parses `key=value` lines; blank lines and `#` comments are ignored.
/// Accepts either (beta, pi_g, pi_h_given_gc) or (beta_h, beta_w, beta_g), never both.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) reproduces c.
std::string format_config(const Config& config);

}  // namespace hwepi
