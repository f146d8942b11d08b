#pragma once

// Experiment configuration file: INI-style `key = value` sections
// [experiment], [agent], [planner], [env]. Lists are whitespace or comma
// separated; matrix rows are separated by ';'. Unknown sections or keys are
// rejected. Every key is optional and defaults to the built-in value.

#include "dhm/harness.hpp"

#include <filesystem>
#include <stdexcept>
#include <string>

namespace dhm {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The full schema with default values, in the file format.
std::string default_config_text();

Vec parse_vector(const std::string& s);
Mat parse_matrix(const std::string& s);

} // namespace dhm
