#pragma once

#include <vector>

#include "snvkit/least_squares.hpp"
#include "snvkit/transitions.hpp"

namespace snvkit {

enum class LineSelection { All, Inner, Outer };

LineSelection parse_line_selection(std::string_view text);
std::string to_string(LineSelection s);

struct AlphaFitOptions {
  LineSelection lines = LineSelection::All;
  std::vector<Family> families{Family::C, Family::D};
  LabVector direction{0.0, 0.0, 1.0};
  FitOptions solver{};
};

/// Per-parity scale on the orbital g-factor (scales f and delta_f together).
struct AlphaFit {
  double alpha_g = 1.0;
  double alpha_u = 1.0;
  double alpha_g_err = 0.0;
  double alpha_u_err = 0.0;
  double rss_scaled = 0.0;    // GHz^2 at the optimum
  double rss_unscaled = 0.0;  // GHz^2 at alpha = (1, 1)
  std::size_t residual_count = 0;
  std::size_t fields_used = 0;
  FitResult fit;
};

/// Unweighted least squares of pairwise-centered measured line positions
/// against the pairwise-centered model. Only families with all four line
/// indices at a nonzero field contribute. Throws InsufficientData with fewer
/// than two usable fields.
AlphaFit fit_alpha(const SweepTable& measured, const ManifoldParameters& ground,
                   const ManifoldParameters& excited, const PhysicalConstants& constants,
                   DefectOrientation orientation, const AlphaFitOptions& options = {});

/// Residual sum of squares at a given (alpha_g, alpha_u), same objective as fit_alpha.
double alpha_objective(const SweepTable& measured, const ManifoldParameters& ground,
                       const ManifoldParameters& excited, const PhysicalConstants& constants,
                       DefectOrientation orientation, double alpha_g, double alpha_u,
                       const AlphaFitOptions& options = {});

}  // namespace snvkit
