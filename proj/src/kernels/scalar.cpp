#include <cmath>

#include "kernels_internal.hpp"

namespace snvkit::kernels::detail {

void lorentzian_sum_scalar_range(std::span<const double> x, std::span<const PeakParams> peaks,
                                 double background, std::span<double> y, JacobianOut jac,
                                 std::size_t begin) {
  const std::size_t np = peaks.size();
  for (std::size_t i = begin; i < x.size(); ++i) {
    double acc = background;
    for (std::size_t k = 0; k < np; ++k) {
      const double gamma = 0.5 * peaks[k].fwhm;
      const double g2 = gamma * gamma;
      const double u = x[i] - peaks[k].center;
      const double inv = 1.0 / (u * u + g2);
      const double shape = g2 * inv;
      const double a = peaks[k].amplitude;
      acc += a * shape;
      if (jac) {
        jac.column(3 * k)[i] = 2.0 * a * shape * u * inv;
        // d/dfwhm = (1/2) d/dgamma, d shape/dgamma = 2 gamma u^2 inv^2
        jac.column(3 * k + 1)[i] = a * gamma * u * u * inv * inv;
        jac.column(3 * k + 2)[i] = shape;
      }
    }
    y[i] = acc;
    if (jac) jac.column(3 * np)[i] = 1.0;
  }
}

void gaussian_sum_scalar_range(std::span<const double> x, std::span<const PeakParams> peaks,
                               double background, std::span<double> y, JacobianOut jac,
                               std::size_t begin) {
  const std::size_t np = peaks.size();
  for (std::size_t i = begin; i < x.size(); ++i) {
    double acc = background;
    for (std::size_t k = 0; k < np; ++k) {
      const double sigma = peaks[k].fwhm / kFwhmPerSigma;
      const double inv_s2 = 1.0 / (sigma * sigma);
      const double u = x[i] - peaks[k].center;
      const double g = std::exp(-0.5 * u * u * inv_s2);
      const double a = peaks[k].amplitude;
      acc += a * g;
      if (jac) {
        jac.column(3 * k)[i] = a * g * u * inv_s2;
        jac.column(3 * k + 1)[i] = a * g * u * u * inv_s2 / (sigma * kFwhmPerSigma);
        jac.column(3 * k + 2)[i] = g;
      }
    }
    y[i] = acc;
    if (jac) jac.column(3 * np)[i] = 1.0;
  }
}

void g2_curve_scalar_range(std::span<const double> tau, const G2Coeffs& p, std::span<double> y,
                           JacobianOut jac, std::size_t begin) {
  const double r1 = 1.0 / p.tau1;
  const double r2 = 1.0 / p.tau2;
  for (std::size_t i = begin; i < tau.size(); ++i) {
    const double t = std::fabs(tau[i]);
    const double e1 = std::exp(-t * r1);
    const double e2 = std::exp(-t * r2);
    const double bracket = (1.0 + p.b) * e1 - p.b * e2;
    y[i] = 1.0 - p.c * bracket;
    if (jac) {
      jac.column(0)[i] = -p.c * (e1 - e2);
      jac.column(1)[i] = -bracket;
      jac.column(2)[i] = -p.c * (1.0 + p.b) * e1 * t * r1 * r1;
      jac.column(3)[i] = p.c * p.b * e2 * t * r2 * r2;
    }
  }
}

namespace {

void lorentzian_sum_scalar(std::span<const double> x, std::span<const PeakParams> peaks,
                           double background, std::span<double> y, JacobianOut jac) {
  lorentzian_sum_scalar_range(x, peaks, background, y, jac, 0);
}

void gaussian_sum_scalar(std::span<const double> x, std::span<const PeakParams> peaks,
                         double background, std::span<double> y, JacobianOut jac) {
  gaussian_sum_scalar_range(x, peaks, background, y, jac, 0);
}

void g2_curve_scalar(std::span<const double> tau, const G2Coeffs& p, std::span<double> y,
                     JacobianOut jac) {
  g2_curve_scalar_range(tau, p, y, jac, 0);
}

void exp_scalar(std::span<const double> x, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = std::exp(x[i]);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{"scalar", &lorentzian_sum_scalar, &gaussian_sum_scalar,
                                 &g2_curve_scalar, &exp_scalar};
  return table;
}

}  // namespace snvkit::kernels::detail
