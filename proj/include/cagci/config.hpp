#pragma once

#include "cagci/harness.hpp"

#include <filesystem>
#include <istream>
#include <stdexcept>
#include <string>

namespace cagci {

/// Malformed or unknown configuration entry; the message names the key.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parses the `[section]` / `key = value` format. `#` and `;` start
/// comments. See config_reference() for the keys.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Config text describing a scenario; parse_config reads it back.
std::string scenario_to_config(const Scenario& s);

/// Every key with its default, for --help.
std::string config_reference();

}  // namespace cagci
