// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.

#include <immintrin.h>

#include "kernels_internal.hpp"

namespace snvkit::kernels::detail {

namespace {

// Cephes-style exp: x = n ln2 + r, rational approximation on r, then the
// result is scaled by 2^n in two halves so that n may reach the subnormal
// and near-overflow ends of the double range.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo = _mm256_set1_pd(-746.0);
  const __m256d hi = _mm256_set1_pd(710.0);
  const __m256d under = _mm256_cmp_pd(x, lo, _CMP_LT_OQ);
  const __m256d over = _mm256_cmp_pd(x, hi, _CMP_GT_OQ);
  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);

  const __m256d fx = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634073599)),
                                     _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(6.93145751953125E-1), x);
  x = _mm256_fnmadd_pd(fx, _mm256_set1_pd(1.42860682030941723212E-6), x);

  const __m256d xx = _mm256_mul_pd(x, x);
  __m256d px = _mm256_fmadd_pd(_mm256_set1_pd(1.26177193074810590878E-4), xx,
                               _mm256_set1_pd(3.02994407707441961300E-2));
  px = _mm256_fmadd_pd(px, xx, _mm256_set1_pd(9.99999999999999999910E-1));
  px = _mm256_mul_pd(px, x);
  __m256d qx = _mm256_fmadd_pd(_mm256_set1_pd(3.00198505138664455042E-6), xx,
                               _mm256_set1_pd(2.52448340349684104192E-3));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.27265548208155028766E-1));
  qx = _mm256_fmadd_pd(qx, xx, _mm256_set1_pd(2.00000000000000000009E0));

  __m256d r = _mm256_div_pd(px, _mm256_sub_pd(qx, px));
  r = _mm256_fmadd_pd(_mm256_set1_pd(2.0), r, _mm256_set1_pd(1.0));

  // n = n1 + n2 with both halves giving normal powers of two.
  const __m128i n = _mm256_cvtpd_epi32(fx);
  const __m128i n1 = _mm_srai_epi32(n, 1);
  const __m128i n2 = _mm_sub_epi32(n, n1);
  const __m256i bias = _mm256_set1_epi64x(1023);
  const __m256d s1 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n1), bias), 52));
  const __m256d s2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(n2), bias), 52));
  r = _mm256_mul_pd(_mm256_mul_pd(r, s1), s2);
  r = _mm256_blendv_pd(r, _mm256_setzero_pd(), under);
  r = _mm256_blendv_pd(r, _mm256_set1_pd(__builtin_inf()), over);
  return r;
}

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

void exp_avx2(std::span<const double> x, std::span<double> y) {
  const std::size_t n = x.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
  }
  if (i < n) {
    alignas(32) double buf[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t k = i; k < n; ++k) buf[k - i] = x[k];
    _mm256_store_pd(buf, exp_pd(_mm256_load_pd(buf)));
    for (std::size_t k = i; k < n; ++k) y[k] = buf[k - i];
  }
}

void lorentzian_sum_avx2(std::span<const double> x, std::span<const PeakParams> peaks,
                         double background, std::span<double> y, JacobianOut jac) {
  const std::size_t n = x.size();
  const std::size_t np = peaks.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    __m256d acc = _mm256_set1_pd(background);
    for (std::size_t k = 0; k < np; ++k) {
      const double gamma_s = 0.5 * peaks[k].fwhm;
      const __m256d gamma = _mm256_set1_pd(gamma_s);
      const __m256d g2 = _mm256_set1_pd(gamma_s * gamma_s);
      const __m256d a = _mm256_set1_pd(peaks[k].amplitude);
      const __m256d u = _mm256_sub_pd(xv, _mm256_set1_pd(peaks[k].center));
      const __m256d inv = _mm256_div_pd(_mm256_set1_pd(1.0), _mm256_fmadd_pd(u, u, g2));
      const __m256d shape = _mm256_mul_pd(g2, inv);
      acc = _mm256_fmadd_pd(a, shape, acc);
      if (jac) {
        const __m256d a_shape = _mm256_mul_pd(a, shape);
        const __m256d u_inv = _mm256_mul_pd(u, inv);
        _mm256_storeu_pd(jac.column(3 * k) + i,
                         _mm256_mul_pd(_mm256_set1_pd(2.0), _mm256_mul_pd(a_shape, u_inv)));
        const __m256d ag = _mm256_mul_pd(a, gamma);
        _mm256_storeu_pd(jac.column(3 * k + 1) + i,
                         _mm256_mul_pd(ag, _mm256_mul_pd(u_inv, u_inv)));
        _mm256_storeu_pd(jac.column(3 * k + 2) + i, shape);
      }
    }
    _mm256_storeu_pd(y.data() + i, acc);
    if (jac) _mm256_storeu_pd(jac.column(3 * np) + i, _mm256_set1_pd(1.0));
  }
  lorentzian_sum_scalar_range(x, peaks, background, y, jac, i);
}

void gaussian_sum_avx2(std::span<const double> x, std::span<const PeakParams> peaks,
                       double background, std::span<double> y, JacobianOut jac) {
  const std::size_t n = x.size();
  const std::size_t np = peaks.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d xv = _mm256_loadu_pd(x.data() + i);
    __m256d acc = _mm256_set1_pd(background);
    for (std::size_t k = 0; k < np; ++k) {
      const double sigma = peaks[k].fwhm / kFwhmPerSigma;
      const double inv_s2_s = 1.0 / (sigma * sigma);
      const __m256d inv_s2 = _mm256_set1_pd(inv_s2_s);
      const __m256d a = _mm256_set1_pd(peaks[k].amplitude);
      const __m256d u = _mm256_sub_pd(xv, _mm256_set1_pd(peaks[k].center));
      const __m256d u2 = _mm256_mul_pd(u, u);
      const __m256d g = exp_pd(_mm256_mul_pd(_mm256_set1_pd(-0.5), _mm256_mul_pd(u2, inv_s2)));
      acc = _mm256_fmadd_pd(a, g, acc);
      if (jac) {
        const __m256d ag = _mm256_mul_pd(a, g);
        _mm256_storeu_pd(jac.column(3 * k) + i, _mm256_mul_pd(ag, _mm256_mul_pd(u, inv_s2)));
        const __m256d scale = _mm256_set1_pd(inv_s2_s / (sigma * kFwhmPerSigma));
        _mm256_storeu_pd(jac.column(3 * k + 1) + i, _mm256_mul_pd(ag, _mm256_mul_pd(u2, scale)));
        _mm256_storeu_pd(jac.column(3 * k + 2) + i, g);
      }
    }
    _mm256_storeu_pd(y.data() + i, acc);
    if (jac) _mm256_storeu_pd(jac.column(3 * np) + i, _mm256_set1_pd(1.0));
  }
  gaussian_sum_scalar_range(x, peaks, background, y, jac, i);
}

void g2_curve_avx2(std::span<const double> tau, const G2Coeffs& p, std::span<double> y,
                   JacobianOut jac) {
  const std::size_t n = tau.size();
  const __m256d r1 = _mm256_set1_pd(1.0 / p.tau1);
  const __m256d r2 = _mm256_set1_pd(1.0 / p.tau2);
  const __m256d b = _mm256_set1_pd(p.b);
  const __m256d c = _mm256_set1_pd(p.c);
  const __m256d one_b = _mm256_set1_pd(1.0 + p.b);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d t = abs_pd(_mm256_loadu_pd(tau.data() + i));
    const __m256d neg = _mm256_set1_pd(-0.0);
    const __m256d e1 = exp_pd(_mm256_xor_pd(neg, _mm256_mul_pd(t, r1)));
    const __m256d e2 = exp_pd(_mm256_xor_pd(neg, _mm256_mul_pd(t, r2)));
    const __m256d bracket = _mm256_fnmadd_pd(b, e2, _mm256_mul_pd(one_b, e1));
    _mm256_storeu_pd(y.data() + i, _mm256_fnmadd_pd(c, bracket, one));
    if (jac) {
      _mm256_storeu_pd(jac.column(0) + i,
                       _mm256_xor_pd(neg, _mm256_mul_pd(c, _mm256_sub_pd(e1, e2))));
      _mm256_storeu_pd(jac.column(1) + i, _mm256_xor_pd(neg, bracket));
      const __m256d d1 = _mm256_mul_pd(_mm256_mul_pd(c, one_b),
                                       _mm256_mul_pd(e1, _mm256_mul_pd(t, _mm256_mul_pd(r1, r1))));
      _mm256_storeu_pd(jac.column(2) + i, _mm256_xor_pd(neg, d1));
      const __m256d d2 = _mm256_mul_pd(_mm256_mul_pd(c, b),
                                       _mm256_mul_pd(e2, _mm256_mul_pd(t, _mm256_mul_pd(r2, r2))));
      _mm256_storeu_pd(jac.column(3) + i, d2);
    }
  }
  g2_curve_scalar_range(tau, p, y, jac, i);
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table{"avx2", &lorentzian_sum_avx2, &gaussian_sum_avx2, &g2_curve_avx2,
                                 &exp_avx2};
  return table;
}

}  // namespace snvkit::kernels::detail
