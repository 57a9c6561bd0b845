#pragma once
// Scenario config file handling. A missing file yields the built-in default
// scenario (60 UEs, 50/30/20 video/gaming/voice mix, 1 eNB + 4 gNBs).

#include <filesystem>
#include <stdexcept>
#include <string>

#include "ratsteer/harness.hpp"

namespace ratsteer {

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

Scenario default_scenario();

// Parses and validates a JSON scenario file. Unknown keys and out-of-range
// values are rejected with the offending field path in the message.
Scenario parse_config(const std::filesystem::path& file);
Scenario parse_config_text(const std::string& json_text);

std::string serialize_config(const Scenario& sc);

}  // namespace ratsteer
