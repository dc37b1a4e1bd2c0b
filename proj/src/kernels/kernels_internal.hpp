#pragma once

#include <optional>

#include "snvkit/kernels.hpp"

namespace snvkit::kernels::detail {

// Scalar loops starting at `begin`; the SIMD variants use them for tails.
void lorentzian_sum_scalar_range(std::span<const double> x, std::span<const PeakParams> peaks,
                                 double background, std::span<double> y, JacobianOut jac,
                                 std::size_t begin);
void gaussian_sum_scalar_range(std::span<const double> x, std::span<const PeakParams> peaks,
                               double background, std::span<double> y, JacobianOut jac,
                               std::size_t begin);
void g2_curve_scalar_range(std::span<const double> tau, const G2Coeffs& p, std::span<double> y,
                           JacobianOut jac, std::size_t begin);

const KernelTable& scalar_table();

#if defined(SNVKIT_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace snvkit::kernels::detail
