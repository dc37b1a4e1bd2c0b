#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "snvkit/models.hpp"
#include "snvkit/series.hpp"
#include "snvkit/transitions.hpp"

namespace snvkit {

/// Deterministic random source for fixtures.
///
/// Engine: std::mt19937_64 seeded with the 64-bit seed. Uniforms take the top
/// 53 bits: (next() >> 11) * 2^-53. Normals use Box-Muller,
/// sqrt(-2 ln(1 - u1)) * cos(2 pi u2), with the sin partner cached for the
/// next call. Poisson uses multiplication of uniforms for mean < 10 and the
/// PTRS transformed-rejection method otherwise.
class FixtureRng {
 public:
  explicit FixtureRng(std::uint64_t seed) : engine_(seed) {}

  double uniform();
  double normal();
  std::int64_t poisson(double mean);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class NoiseKind { None, GaussianRelative, GaussianAbsolute, PoissonCounts };

std::string to_string(NoiseKind k);
NoiseKind parse_noise_kind(std::string_view text);

/// gaussian_relative: sigma = magnitude * |model|; gaussian_absolute:
/// sigma = magnitude; poisson_counts: y ~ Poisson(model), magnitude unused.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::None;
  double magnitude = 0.0;
  std::uint64_t seed = 0;
};

/// Adds noise to model values in place, one draw per sample in order.
void apply_noise(std::span<double> values, const NoiseSpec& noise);

/// Evenly spaced grid including both end points.
std::vector<double> linear_grid(double first, double last, std::size_t count);

/// Sum of peaks at the line offsets. Each peak's height is
/// `peak_height * intensity`, so areas scale with intensity at a common width.
/// Always evaluated with the scalar reference kernels.
SpectrumSeries synth_spectrum(std::span<const TransitionLine> lines, double linewidth_ghz,
                              std::span<const double> grid, const NoiseSpec& noise,
                              double baseline, double peak_height = 1.0,
                              PeakShape shape = PeakShape::Lorentzian);

SpectrumSeries synth_g2(const G2Params& p, std::span<const double> grid_ns, const NoiseSpec& noise);

/// A cos^2(2(theta - theta0)) + I0 over HWP angles in degrees.
SpectrumSeries synth_polarization(double amplitude, double theta0_deg, double offset,
                                  std::span<const double> angles_deg, const NoiseSpec& noise);

/// Model sweep with f and delta_f scaled by alpha per parity, then a common
/// drift per field (drift_ghz empty or one value per field) and independent
/// Gaussian jitter per line added to the merged lines. Raw lines stay noise
/// free. Lines keep their noise-free index labels.
SweepTable synth_zeeman_dataset(double alpha_g, double alpha_u, const ManifoldParameters& ground,
                                const ManifoldParameters& excited,
                                const PhysicalConstants& constants, DefectOrientation orientation,
                                const LabVector& direction, std::span<const double> fields_tesla,
                                double jitter_ghz, std::span<const double> drift_ghz,
                                std::uint64_t seed);

}  // namespace snvkit
