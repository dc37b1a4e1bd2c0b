#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "snvkit/geometry.hpp"
#include "snvkit/spin_hamiltonian.hpp"

namespace snvkit {

/// Effective configuration of a run. Plain-text form is one key=value per
/// line with '#' comments, e.g. `ground.lambda_so_ghz=850`. Unknown keys are
/// rejected. Precedence: built-in defaults, then config file, then flags.
struct RunConfig {
  PhysicalConstants constants{};
  ManifoldParameters ground = snv_ground();
  ManifoldParameters excited = snv_excited();
  DefectOrientation orientation = DefectOrientation::Axis111;
  std::string output_dir = ".";
  std::uint64_t seed = 0;
  /// Per-command options, keyed "<command>.<name>"; always holds every known key.
  std::map<std::string, std::string> options;

  RunConfig();

  void set(std::string_view key, std::string_view value);
  void load_text(std::string_view text);
  void validate() const;

  /// Every key with its effective value, sorted by key.
  std::vector<std::pair<std::string, std::string>> entries() const;
  std::string echo() const;

  const std::string& option(std::string_view key) const;
  double option_double(std::string_view key) const;
  long long option_int(std::string_view key) const;
  std::vector<double> option_list(std::string_view key) const;
};

std::vector<double> parse_double_list(std::string_view text);

}  // namespace snvkit
