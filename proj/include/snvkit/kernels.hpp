#pragma once

// Lineshape and autocorrelation kernels evaluated over a sample grid.
//
// Every kernel exists as a scalar reference and, on x86-64, an AVX2+FMA
// variant. active_kernels() picks one at runtime; set SNVKIT_KERNELS=scalar
// to force the reference path.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

namespace snvkit::kernels {

struct PeakParams {
  double center = 0.0;
  double fwhm = 1.0;
  double amplitude = 1.0;  // peak height above background
};

struct G2Coeffs {
  double b = 0.0;
  double c = 0.0;
  double tau1 = 1.0;
  double tau2 = 1.0;
};

/// Jacobian output, column-major with leading dimension `rows`. For peak sums
/// the columns are (center, fwhm, amplitude) per peak followed by background.
/// For g2 the columns are (b, c, tau1, tau2). A null pointer skips it.
struct JacobianOut {
  double* data = nullptr;
  std::size_t rows = 0;

  double* column(std::size_t j) const { return data + j * rows; }
  explicit operator bool() const { return data != nullptr; }
};

using PeakSumFn = void (*)(std::span<const double> x, std::span<const PeakParams> peaks,
                           double background, std::span<double> y, JacobianOut jac);
using G2Fn = void (*)(std::span<const double> tau, const G2Coeffs& p, std::span<double> y,
                      JacobianOut jac);
using ExpFn = void (*)(std::span<const double> x, std::span<double> y);

struct KernelTable {
  std::string_view name;
  PeakSumFn lorentzian_sum;
  PeakSumFn gaussian_sum;
  G2Fn g2_curve;
  ExpFn exp;
};

const KernelTable& scalar_kernels();
/// Present when the build has the AVX2 variant and the CPU supports it.
std::optional<KernelTable> avx2_kernels();
const KernelTable& active_kernels();

inline constexpr double kFwhmPerSigma = 2.3548200450309493;  // 2 sqrt(2 ln 2)

}  // namespace snvkit::kernels
