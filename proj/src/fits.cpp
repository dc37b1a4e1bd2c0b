#include "snvkit/fits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <Eigen/Dense>

#include "snvkit/errors.hpp"

namespace snvkit {

namespace {

double percentile(std::vector<double> v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

// Robust noise scale from first differences (MAD, Gaussian-consistent).
double noise_scale(const std::vector<double>& y) {
  if (y.size() < 3) return 0.0;
  std::vector<double> d(y.size() - 1);
  for (std::size_t i = 1; i < y.size(); ++i) d[i - 1] = std::fabs(y[i] - y[i - 1]);
  return 1.4826 * percentile(d, 0.5) / std::sqrt(2.0);
}

struct PeakGuess {
  double center;
  double fwhm;
  double amplitude;
};

double crossing(const std::vector<double>& x, const std::vector<double>& r, std::size_t inside,
                std::size_t outside, double level) {
  const double t = (r[inside] - level) / (r[inside] - r[outside]);
  return x[inside] + t * (x[outside] - x[inside]);
}

PeakGuess locate_peak(const std::vector<double>& x, const std::vector<double>& r) {
  const auto it = std::max_element(r.begin(), r.end());
  const auto i = static_cast<std::size_t>(it - r.begin());
  const double h = *it;
  if (!(h > 0.0)) throw PeakNotFound("no maximum above the baseline");
  const double half = 0.5 * h;

  std::optional<double> left;
  std::optional<double> right;
  for (std::size_t j = i; j-- > 0;) {
    if (r[j] <= half) {
      left = crossing(x, r, j + 1, j, half);
      break;
    }
  }
  for (std::size_t j = i + 1; j < r.size(); ++j) {
    if (r[j] <= half) {
      right = crossing(x, r, j - 1, j, half);
      break;
    }
  }
  double fwhm;
  if (left && right) {
    fwhm = std::fabs(*right - *left);
  } else if (left || right) {
    fwhm = 2.0 * std::fabs((left ? *left : *right) - x[i]);
  } else {
    fwhm = 0.25 * std::fabs(x.back() - x.front());
  }
  const double spacing = std::fabs(x.back() - x.front()) / static_cast<double>(x.size() - 1);
  return {x[i], std::max(fwhm, spacing), h};
}

double profile(PeakShape shape, const PeakGuess& g, double x) {
  const double u = x - g.center;
  if (shape == PeakShape::Lorentzian) {
    const double gamma = 0.5 * g.fwhm;
    return g.amplitude * gamma * gamma / (u * u + gamma * gamma);
  }
  const double sigma = g.fwhm / kernels::kFwhmPerSigma;
  return g.amplitude * std::exp(-0.5 * u * u / (sigma * sigma));
}

void add_areas(PeakShape shape, FitResult& r, int n_peaks) {
  for (int k = 0; k < n_peaks; ++k) {
    const std::size_t jf = 3 * static_cast<std::size_t>(k) + 1;
    const std::size_t ja = jf + 1;
    const double fwhm = r.params[jf];
    const double amp = r.params[ja];
    const double area = PeakSumModel::area(shape, fwhm, amp);
    // area is bilinear in (fwhm, amplitude)
    const double d_fwhm = PeakSumModel::area(shape, 1.0, amp);
    const double d_amp = PeakSumModel::area(shape, fwhm, 1.0);
    double var = d_fwhm * d_fwhm * r.cov(jf, jf) + d_amp * d_amp * r.cov(ja, ja) +
                 2.0 * d_fwhm * d_amp * r.cov(jf, ja);
    if (r.is_unconstrained(r.names[jf]) || r.is_unconstrained(r.names[ja])) {
      var = std::numeric_limits<double>::infinity();
    }
    r.derived.push_back({"peak" + std::to_string(k) + ".area", area, std::sqrt(std::max(var, 0.0))});
  }
}

}  // namespace

FitResult fit_peaks_from(const SpectrumSeries& data, PeakShape shape,
                         std::vector<kernels::PeakParams> init, double background,
                         const FitOptions& options) {
  const int n_peaks = static_cast<int>(init.size());
  const PeakSumModel model(shape, n_peaks);
  data.validate(3 * init.size() + 2);

  const auto [xmin_it, xmax_it] = std::minmax_element(data.x.begin(), data.x.end());
  const double xmin = *xmin_it;
  const double xmax = *xmax_it;
  const double span = xmax - xmin;
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> p;
  ParameterBounds bounds;
  for (const auto& pk : init) {
    p.insert(p.end(), {pk.center, pk.fwhm, pk.amplitude});
    bounds.lower.insert(bounds.lower.end(), {xmin, 1e-9 * span, 0.0});
    bounds.upper.insert(bounds.upper.end(), {xmax, 10.0 * span, inf});
  }
  p.push_back(background);
  bounds.lower.push_back(-inf);
  bounds.upper.push_back(inf);

  FitResult r = least_squares(model, data, std::move(p), bounds, options);
  add_areas(shape, r, n_peaks);
  return r;
}

FitResult fit_peaks(const SpectrumSeries& data, PeakShape shape, int n_peaks,
                    const FitOptions& options) {
  if (n_peaks != 1 && n_peaks != 2) throw InvalidArgument("peak count must be 1 or 2");
  data.validate(3 * static_cast<std::size_t>(n_peaks) + 2);

  const double baseline = percentile(data.y, 0.1);
  std::vector<double> resid(data.y.size());
  for (std::size_t i = 0; i < resid.size(); ++i) resid[i] = data.y[i] - baseline;
  const PeakGuess first = locate_peak(data.x, resid);

  std::vector<PeakGuess> guesses{first};
  std::vector<std::string> warnings;
  if (n_peaks == 2) {
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= profile(shape, first, data.x[i]);
    const double noise = noise_scale(data.y);
    std::optional<PeakGuess> second;
    try {
      second = locate_peak(data.x, resid);
    } catch (const PeakNotFound&) {
    }
    const bool resolvable =
        second && second->amplitude > std::max(5.0 * noise, 0.02 * first.amplitude) &&
        std::fabs(second->center - first.center) > 0.5 * std::max(first.fwhm, second->fwhm);
    if (resolvable) {
      guesses.push_back(*second);
      std::sort(guesses.begin(), guesses.end(),
                [](const PeakGuess& a, const PeakGuess& b) { return a.center > b.center; });
    } else {
      warnings.push_back("second peak not resolvable; fitted a single peak");
    }
  }

  std::vector<kernels::PeakParams> init;
  for (const auto& g : guesses) init.push_back({g.center, g.fwhm, g.amplitude});
  FitResult r = fit_peaks_from(data, shape, std::move(init), baseline, options);
  r.warnings.insert(r.warnings.end(), warnings.begin(), warnings.end());
  return r;
}

G2Params initial_g2_guess(const SpectrumSeries& data) {
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::fabs(data.x[a]) < std::fabs(data.x[b]);
  });
  std::vector<double> t(order.size());
  std::vector<double> raw(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    t[i] = std::fabs(data.x[order[i]]);
    raw[i] = data.y[order[i]];
  }
  // Moving average over |tau|, so the two sides of the histogram are pooled.
  const std::size_t w = 3;
  std::vector<double> y(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const std::size_t lo = i >= w ? i - w : 0;
    const std::size_t hi = std::min(raw.size() - 1, i + w);
    double s = 0.0;
    for (std::size_t k = lo; k <= hi; ++k) s += raw[k];
    y[i] = s / static_cast<double>(hi - lo + 1);
  }

  const double noise = noise_scale(raw);
  const double depth = 1.0 - y.front();
  if (!(depth > std::max(0.05, 3.0 * noise))) {
    throw InitGuessFailed("no antibunching dip below the g2 = 1 baseline");
  }
  const double c = std::min(depth, 1.0);

  std::size_t half = 0;
  while (half < y.size() && y[half] < 1.0 - 0.5 * depth) ++half;
  if (half == 0 || half == y.size()) {
    throw InitGuessFailed("dip half-depth crossing not bracketed by the delay range");
  }
  const double tau1 = std::max(t[half], 1e-6) / std::numbers::ln2;

  const auto peak_it = std::max_element(y.begin() + static_cast<std::ptrdiff_t>(half), y.end());
  const auto peak = static_cast<std::size_t>(peak_it - y.begin());
  const double excess = *peak_it - 1.0;

  G2Params g{0.05, c, tau1, 10.0 * tau1};
  if (excess > 2.0 * noise && excess > 0.0) {
    std::size_t k = peak;
    while (k < y.size() && y[k] - 1.0 > excess / std::numbers::e) ++k;
    const double tail = k < y.size() ? t[k] - t[peak] : 0.5 * (t.back() - t[peak]);
    g.tau2_ns = std::max(tail, 2.0 * tau1);
    g.b = excess / (c * std::exp(-t[peak] / g.tau2_ns));
  }
  return g;
}

FitResult fit_g2(const SpectrumSeries& data, const FitOptions& options) {
  data.validate(5, false);
  const G2Params g = initial_g2_guess(data);
  const double inf = std::numeric_limits<double>::infinity();
  const ParameterBounds bounds{{0.0, 0.0, 1e-6, 1e-6}, {inf, 1.0, inf, inf}};
  const G2Model model;
  FitResult r = least_squares(model, data, {g.b, g.c, g.tau1_ns, g.tau2_ns}, bounds, options);
  const std::size_t ic = r.index_of("c");
  r.derived.push_back({"g2_zero", 1.0 - r.params[ic], r.std_errors[ic]});
  if (r.is_unconstrained("tau2")) {
    r.warnings.push_back("tau2 unconstrained: bunching amplitude consistent with zero");
  }
  double tmax = 0.0;
  for (double x : data.x) tmax = std::max(tmax, std::fabs(x));
  if (tmax < 3.0 * g.tau2_ns) {
    r.warnings.push_back("delay range shorter than three bunching time constants");
  }
  return r;
}

double lifetime_limited_linewidth_mhz(double tau1_ns) {
  if (!(tau1_ns > 0.0)) throw InvalidArgument("lifetime must be positive");
  return 1000.0 / (2.0 * std::numbers::pi * tau1_ns);
}

FitResult fit_polarization(const SpectrumSeries& scan, const FitOptions& options) {
  scan.validate(8, false);
  const auto [lo, hi] = std::minmax_element(scan.x.begin(), scan.x.end());
  if (*hi - *lo < 90.0) throw InsufficientData("polarization scan must span at least 90 degrees");

  const double deg = std::numbers::pi / 180.0;
  const auto m = static_cast<Eigen::Index>(scan.size());
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd rhs(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double th = 4.0 * scan.x[static_cast<std::size_t>(i)] * deg;
    design(i, 0) = 1.0;
    design(i, 1) = std::cos(th);
    design(i, 2) = std::sin(th);
    rhs(i) = scan.y[static_cast<std::size_t>(i)];
  }
  const Eigen::MatrixXd normal = design.transpose() * design;
  const Eigen::VectorXd k = normal.ldlt().solve(design.transpose() * rhs);
  const double resid_var = (design * k - rhs).squaredNorm() / static_cast<double>(m - 3);
  const Eigen::MatrixXd cov = normal.inverse() * resid_var;
  const double amp = 2.0 * std::hypot(k(1), k(2));
  const double amp_err = 2.0 * std::sqrt(std::max(cov(1, 1), cov(2, 2)));
  double ymax = 0.0;
  for (double v : scan.y) ymax = std::max(ymax, std::fabs(v));
  if (!(amp > 3.0 * amp_err) || !(amp > 1e-12 * ymax)) {
    throw DegenerateModulation("modulation amplitude consistent with zero");
  }
  const double theta0 = 0.25 * std::atan2(k(2), k(1));
  const double offset = k(0) - 0.5 * amp;

  const double inf = std::numeric_limits<double>::infinity();
  const ParameterBounds bounds{{0.0, -inf, -inf}, {inf, inf, inf}};
  const MalusModel model;
  FitResult r = least_squares(model, scan, {amp, theta0, offset}, bounds, options);

  // Report theta0 in degrees, folded into [0, 90).
  const std::size_t it = r.index_of("theta0");
  double t_deg = std::fmod(r.params[it] / deg, 90.0);
  if (t_deg < 0.0) t_deg += 90.0;
  const double n = static_cast<double>(r.names.size());
  r.names[it] = "theta0_deg";
  r.params[it] = t_deg;
  r.std_errors[it] /= deg;
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    r.covariance[it * static_cast<std::size_t>(n) + j] /= deg;
    r.covariance[j * static_cast<std::size_t>(n) + it] /= deg;
  }
  for (auto& u : r.unconstrained) {
    if (u == "theta0") u = "theta0_deg";
  }

  const double a = r.param("amplitude");
  const double i0 = r.param("offset");
  const double denom = a + 2.0 * i0;
  const double vis = a / denom;
  const double da = 2.0 * i0 / (denom * denom);
  const double di = -2.0 * a / (denom * denom);
  const std::size_t ja = r.index_of("amplitude");
  const std::size_t jo = r.index_of("offset");
  const double var = da * da * r.cov(ja, ja) + di * di * r.cov(jo, jo) + 2.0 * da * di * r.cov(ja, jo);
  r.derived.push_back({"visibility", vis, std::sqrt(std::max(var, 0.0))});
  return r;
}

OrthogonalityVerdict check_orthogonality(const FitResult& first, const FitResult& second,
                                         double tolerance_deg) {
  double d = std::fmod(std::fabs(first.param("theta0_deg") - second.param("theta0_deg")), 90.0);
  if (d > 45.0) d = 90.0 - d;
  OrthogonalityVerdict v;
  v.hwp_separation_deg = d;
  v.dipole_angle_deg = 2.0 * d;
  v.perpendicular = std::fabs(d - 45.0) <= tolerance_deg;
  return v;
}

}  // namespace snvkit
