#pragma once

#include <cstdint>
#include <string>

#include "bienforce/core.hpp"

namespace bienforce {

/// Tool configuration: the finite universe, the synthesis default value, and
/// the exploration bounds. File format: `key = value` lines, lists
/// comma-separated, `#` comments.
struct Config {
  Universe universe{{"a", "b", "c"},
                    {Value::integer(1), Value::integer(2), Value::atom("cls"),
                     Value::atom("vdef")}};
  Value default_value = Value::atom("vdef");
  int tau_bound = 64;
  int state_bound = 10000;
  int depth = 8;
  int step_bound = 256;
  std::uint64_t seed = 1;
};

Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

std::string read_file(const std::string& path);

}  // namespace bienforce
