#pragma once

#include <vector>

#include "snvkit/least_squares.hpp"
#include "snvkit/models.hpp"
#include "snvkit/series.hpp"

namespace snvkit {

/// Peak fit with automatic initial guesses. Parameters are named as in
/// PeakSumModel; derived values peak<k>.area. With n_peaks = 2 and no
/// resolvable second peak it falls back to one peak and adds a warning.
/// Throws PeakNotFound if the trace has no maximum above its baseline.
FitResult fit_peaks(const SpectrumSeries& data, PeakShape shape, int n_peaks,
                    const FitOptions& options = {});

/// Peak fit from an explicit starting point (background is the last entry).
FitResult fit_peaks_from(const SpectrumSeries& data, PeakShape shape,
                         std::vector<kernels::PeakParams> init, double background,
                         const FitOptions& options = {});

inline FitResult fit_lorentzian(const SpectrumSeries& data, int n_peaks) {
  return fit_peaks(data, PeakShape::Lorentzian, n_peaks);
}
inline FitResult fit_gaussian(const SpectrumSeries& data, int n_peaks) {
  return fit_peaks(data, PeakShape::Gaussian, n_peaks);
}

/// Autocorrelation fit over delays in ns. Adds derived value g2_zero = 1 - c.
/// A flat tail (b -> 0) leaves tau2 listed in FitResult::unconstrained.
FitResult fit_g2(const SpectrumSeries& data, const FitOptions& options = {});

/// Starting point used by fit_g2; throws InitGuessFailed without a dip.
G2Params initial_g2_guess(const SpectrumSeries& data);

/// Fourier-limited linewidth 1/(2 pi tau1) in MHz for tau1 in ns.
double lifetime_limited_linewidth_mhz(double tau1_ns);

/// Polarization fit. Parameters amplitude, theta0_deg (folded into [0, 90)),
/// offset; derived value visibility = A / (A + 2 I0). Throws
/// DegenerateModulation when the amplitude is consistent with zero.
FitResult fit_polarization(const SpectrumSeries& scan, const FitOptions& options = {});

struct OrthogonalityVerdict {
  double hwp_separation_deg = 0.0;    // folded into [0, 45]
  double dipole_angle_deg = 0.0;      // twice the HWP separation, in [0, 90]
  bool perpendicular = false;
};

/// Two dipoles are perpendicular when their HWP angles differ by 45 degrees
/// (mod 90) within `tolerance_deg` of HWP rotation.
OrthogonalityVerdict check_orthogonality(const FitResult& first, const FitResult& second,
                                         double tolerance_deg = 1.0);

}  // namespace snvkit
