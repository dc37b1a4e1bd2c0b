#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "snvkit/alpha.hpp"
#include "snvkit/least_squares.hpp"
#include "snvkit/transitions.hpp"

namespace snvkit::io {

inline constexpr const char* kToolkitVersion = "0.1.0";

struct InputDigest {
  std::string path;
  std::string fnv1a64;
};

/// Self-contained record of one command run. Serialized as JSON with a fixed
/// key order; contains nothing run-dependent beyond inputs and config.
struct Report {
  std::string command;
  std::vector<InputDigest> inputs;
  std::vector<std::pair<std::string, std::string>> config;
  nlohmann::ordered_json payload;
};

InputDigest digest_file(const std::filesystem::path& path);

nlohmann::ordered_json to_json(const FitResult& fit);
nlohmann::ordered_json to_json(const SweepTable& table);
nlohmann::ordered_json to_json(const AlphaFit& fit);

std::string format_report(const Report& report);
void emit_report(const Report& report, const std::filesystem::path& path);

}  // namespace snvkit::io
