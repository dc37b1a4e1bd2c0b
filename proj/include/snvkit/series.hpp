#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace snvkit {

/// Sampled data trace: spectrum (GHz), delay histogram (ns) or polarization
/// scan (degrees). `sigma`, when present, holds per-point uncertainties.
struct SpectrumSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::optional<std::vector<double>> sigma;

  std::size_t size() const { return x.size(); }

  /// Throws on length mismatch, non-finite values, fewer than `min_points`
  /// samples, or (when `monotone`) an axis that is not strictly monotone.
  void validate(std::size_t min_points, bool monotone = true) const;
};

}  // namespace snvkit
