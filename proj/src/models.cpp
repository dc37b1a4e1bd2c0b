#include "snvkit/models.hpp"

#include <cmath>
#include <numbers>

#include "snvkit/errors.hpp"

namespace snvkit {

void G2Params::validate() const {
  if (!(tau1_ns > 0.0) || !(tau2_ns > 0.0)) throw InvalidArgument("g2 time constants must be > 0");
  if (!(c >= 0.0 && c <= 1.0)) throw InvalidArgument("g2 depth c must lie in [0, 1]");
  if (!std::isfinite(b)) throw InvalidArgument("g2 bunching amplitude must be finite");
}

double eval_g2(const G2Params& p, double tau_ns) {
  const double t = std::fabs(tau_ns);
  return 1.0 - p.c * ((1.0 + p.b) * std::exp(-t / p.tau1_ns) - p.b * std::exp(-t / p.tau2_ns));
}

std::string to_string(PeakShape shape) {
  return shape == PeakShape::Lorentzian ? "lorentzian" : "gaussian";
}

PeakShape parse_peak_shape(std::string_view text) {
  if (text == "lorentzian") return PeakShape::Lorentzian;
  if (text == "gaussian") return PeakShape::Gaussian;
  throw ConfigError("unknown peak model '" + std::string(text) + "'");
}

PeakSumModel::PeakSumModel(PeakShape shape, int n_peaks) : shape_(shape), n_peaks_(n_peaks) {
  if (n_peaks < 1) throw InvalidArgument("peak count must be >= 1");
}

std::vector<std::string> PeakSumModel::parameter_names() const {
  std::vector<std::string> names;
  for (int k = 0; k < n_peaks_; ++k) {
    const std::string prefix = "peak" + std::to_string(k) + ".";
    names.push_back(prefix + "center");
    names.push_back(prefix + "fwhm");
    names.push_back(prefix + "amplitude");
  }
  names.push_back("background");
  return names;
}

void PeakSumModel::evaluate(std::span<const double> x, std::span<const double> p,
                            std::span<double> y, Eigen::MatrixXd* jac) const {
  std::vector<kernels::PeakParams> peaks(static_cast<std::size_t>(n_peaks_));
  for (std::size_t k = 0; k < peaks.size(); ++k) {
    peaks[k] = {p[3 * k], p[3 * k + 1], p[3 * k + 2]};
  }
  kernels::JacobianOut out;
  if (jac != nullptr) out = {jac->data(), static_cast<std::size_t>(jac->rows())};
  const auto& table = kernels::active_kernels();
  const auto fn = shape_ == PeakShape::Lorentzian ? table.lorentzian_sum : table.gaussian_sum;
  fn(x, peaks, p[3 * peaks.size()], y, out);
}

std::vector<double> PeakSumModel::natural_scales(std::span<const double> p) const {
  std::vector<double> s(p.size());
  double height = 0.0;
  for (int k = 0; k < n_peaks_; ++k) {
    const double fwhm = std::fabs(p[3 * k + 1]);
    const double amp = std::fabs(p[3 * k + 2]);
    s[3 * k] = fwhm;
    s[3 * k + 1] = fwhm;
    s[3 * k + 2] = amp;
    height = std::max(height, amp);
  }
  s.back() = height;
  for (double& v : s) {
    if (!(v > 0.0)) return {};
  }
  return s;
}

double PeakSumModel::area(PeakShape shape, double fwhm, double amplitude) {
  if (shape == PeakShape::Lorentzian) return std::numbers::pi * amplitude * 0.5 * fwhm;
  return amplitude * fwhm / kernels::kFwhmPerSigma * std::sqrt(2.0 * std::numbers::pi);
}

std::vector<std::string> G2Model::parameter_names() const { return {"b", "c", "tau1", "tau2"}; }

void G2Model::evaluate(std::span<const double> x, std::span<const double> p, std::span<double> y,
                       Eigen::MatrixXd* jac) const {
  const kernels::G2Coeffs coeffs{p[0], p[1], p[2], p[3]};
  kernels::JacobianOut out;
  if (jac != nullptr) out = {jac->data(), static_cast<std::size_t>(jac->rows())};
  kernels::active_kernels().g2_curve(x, coeffs, y, out);
}

std::vector<double> G2Model::natural_scales(std::span<const double> p) const {
  return {1.0, 1.0, std::fabs(p[2]), std::fabs(p[3])};
}

std::vector<std::string> MalusModel::parameter_names() const {
  return {"amplitude", "theta0", "offset"};
}

void MalusModel::evaluate(std::span<const double> x, std::span<const double> p,
                          std::span<double> y, Eigen::MatrixXd* jac) const {
  const double deg = std::numbers::pi / 180.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double arg = 2.0 * (x[i] * deg - p[1]);
    const double c = std::cos(arg);
    const double s = std::sin(arg);
    y[i] = p[0] * c * c + p[2];
    if (jac != nullptr) {
      const auto row = static_cast<Eigen::Index>(i);
      (*jac)(row, 0) = c * c;
      (*jac)(row, 1) = 4.0 * p[0] * c * s;  // d/dtheta0 of cos^2(2(theta - theta0))
      (*jac)(row, 2) = 1.0;
    }
  }
}

}  // namespace snvkit
