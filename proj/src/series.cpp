#include "snvkit/series.hpp"

#include <cmath>
#include <string>

#include "snvkit/errors.hpp"

namespace snvkit {

void SpectrumSeries::validate(std::size_t min_points, bool monotone) const {
  if (x.empty()) throw EmptySeries("series has no samples");
  if (x.size() != y.size()) throw InvalidArgument("x and y lengths differ");
  if (sigma && sigma->size() != x.size()) throw InvalidArgument("sigma length differs from x");
  if (x.size() < min_points) {
    throw InsufficientData("series has " + std::to_string(x.size()) + " samples, need " +
                           std::to_string(min_points));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw InvalidArgument("non-finite sample at index " + std::to_string(i));
    }
    if (sigma && !((*sigma)[i] > 0.0)) {
      throw InvalidArgument("sigma must be positive at index " + std::to_string(i));
    }
  }
  if (monotone && x.size() > 1) {
    const bool increasing = x[1] > x[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
      const bool ok = increasing ? x[i] > x[i - 1] : x[i] < x[i - 1];
      if (!ok) throw NonMonotonicAxis("axis not strictly monotone at index " + std::to_string(i));
    }
  }
}

}  // namespace snvkit
