#include "snvkit/synth.hpp"

#include <cmath>
#include <numbers>

#include "snvkit/errors.hpp"
#include "snvkit/kernels.hpp"

namespace snvkit {

double FixtureRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double FixtureRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::int64_t FixtureRng::poisson(double mean) {
  if (!(mean >= 0.0)) throw InvalidArgument("Poisson mean must be >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double prod = uniform();
    while (prod > limit) {
      ++k;
      prod *= uniform();
    }
    return k;
  }
  // Hormann (1993), transformed rejection with squeeze.
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  while (true) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::fabs(u);
    const auto k = static_cast<std::int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
    if (us >= 0.07 && v <= vr) return k;
    if (k < 0 || (us < 0.013 && v > us)) continue;
    const double kd = static_cast<double>(k);
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        -mean + kd * log_mean - std::lgamma(kd + 1.0)) {
      return k;
    }
  }
}

std::string to_string(NoiseKind k) {
  switch (k) {
    case NoiseKind::None: return "none";
    case NoiseKind::GaussianRelative: return "gaussian_relative";
    case NoiseKind::GaussianAbsolute: return "gaussian_absolute";
    case NoiseKind::PoissonCounts: return "poisson_counts";
  }
  return "?";
}

NoiseKind parse_noise_kind(std::string_view text) {
  if (text == "none") return NoiseKind::None;
  if (text == "gaussian_relative") return NoiseKind::GaussianRelative;
  if (text == "gaussian_absolute") return NoiseKind::GaussianAbsolute;
  if (text == "poisson_counts") return NoiseKind::PoissonCounts;
  throw ConfigError("unknown noise kind '" + std::string(text) + "'");
}

void apply_noise(std::span<double> values, const NoiseSpec& noise) {
  if (!(noise.magnitude >= 0.0)) throw InvalidArgument("noise magnitude must be >= 0");
  if (noise.kind == NoiseKind::None) return;
  FixtureRng rng(noise.seed);
  for (double& v : values) {
    switch (noise.kind) {
      case NoiseKind::GaussianRelative: v += noise.magnitude * std::fabs(v) * rng.normal(); break;
      case NoiseKind::GaussianAbsolute: v += noise.magnitude * rng.normal(); break;
      case NoiseKind::PoissonCounts:
        if (v < 0.0) throw InvalidArgument("Poisson noise needs a nonnegative model");
        v = static_cast<double>(rng.poisson(v));
        break;
      case NoiseKind::None: break;
    }
  }
}

std::vector<double> linear_grid(double first, double last, std::size_t count) {
  if (count < 2) throw InvalidArgument("grid needs at least two points");
  std::vector<double> g(count);
  const double step = (last - first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) g[i] = first + step * static_cast<double>(i);
  g.back() = last;
  return g;
}

SpectrumSeries synth_spectrum(std::span<const TransitionLine> lines, double linewidth_ghz,
                              std::span<const double> grid, const NoiseSpec& noise,
                              double baseline, double peak_height, PeakShape shape) {
  if (!(linewidth_ghz > 0.0)) throw InvalidArgument("linewidth must be positive");
  SpectrumSeries s;
  s.x.assign(grid.begin(), grid.end());
  s.y.assign(grid.size(), 0.0);
  std::vector<kernels::PeakParams> peaks;
  for (const auto& l : lines) peaks.push_back({l.offset_ghz, linewidth_ghz, peak_height * l.intensity});
  const auto& k = kernels::scalar_kernels();
  (shape == PeakShape::Lorentzian ? k.lorentzian_sum : k.gaussian_sum)(s.x, peaks, baseline, s.y, {});
  apply_noise(s.y, noise);
  return s;
}

SpectrumSeries synth_g2(const G2Params& p, std::span<const double> grid_ns, const NoiseSpec& noise) {
  p.validate();
  SpectrumSeries s;
  s.x.assign(grid_ns.begin(), grid_ns.end());
  s.y.assign(grid_ns.size(), 0.0);
  for (std::size_t i = 0; i < s.x.size(); ++i) s.y[i] = eval_g2(p, s.x[i]);
  apply_noise(s.y, noise);
  return s;
}

SpectrumSeries synth_polarization(double amplitude, double theta0_deg, double offset,
                                  std::span<const double> angles_deg, const NoiseSpec& noise) {
  SpectrumSeries s;
  s.x.assign(angles_deg.begin(), angles_deg.end());
  s.y.resize(s.x.size());
  const MalusModel model;
  const std::vector<double> p{amplitude, theta0_deg * std::numbers::pi / 180.0, offset};
  model.evaluate(s.x, p, s.y, nullptr);
  apply_noise(s.y, noise);
  return s;
}

SweepTable synth_zeeman_dataset(double alpha_g, double alpha_u, const ManifoldParameters& ground,
                                const ManifoldParameters& excited,
                                const PhysicalConstants& constants, DefectOrientation orientation,
                                const LabVector& direction, std::span<const double> fields_tesla,
                                double jitter_ghz, std::span<const double> drift_ghz,
                                std::uint64_t seed) {
  if (!drift_ghz.empty() && drift_ghz.size() != fields_tesla.size()) {
    throw InvalidArgument("drift list must be empty or have one value per field");
  }
  if (!(jitter_ghz >= 0.0)) throw InvalidArgument("jitter must be >= 0");
  SweepTable table =
      zeeman_sweep(ground.with_orbital_scale(alpha_g), excited.with_orbital_scale(alpha_u),
                   constants, fields_tesla, direction, orientation);
  table.source = SweepSource::Measured;
  FixtureRng rng(seed);
  for (std::size_t k = 0; k < table.entries.size(); ++k) {
    const double drift = drift_ghz.empty() ? 0.0 : drift_ghz[k];
    for (auto& line : table.entries[k].lines) {
      line.offset_ghz += drift;
      if (jitter_ghz > 0.0) {
        line.offset_ghz += jitter_ghz * rng.normal();
        line.sigma_ghz = jitter_ghz;
      }
    }
  }
  return table;
}

}  // namespace snvkit
