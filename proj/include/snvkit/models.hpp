#pragma once

#include <span>
#include <string>
#include <vector>

#include "snvkit/kernels.hpp"
#include "snvkit/least_squares.hpp"

namespace snvkit {

/// Autocorrelation parameters: g2(tau) = 1 - c((1+b) e^{-|tau|/tau1} - b e^{-|tau|/tau2}).
struct G2Params {
  double b = 0.0;
  double c = 0.0;
  double tau1_ns = 1.0;
  double tau2_ns = 1.0;

  void validate() const;
};

double eval_g2(const G2Params& p, double tau_ns);

enum class PeakShape { Lorentzian, Gaussian };

std::string to_string(PeakShape shape);
PeakShape parse_peak_shape(std::string_view text);

/// Sum of `n_peaks` Lorentzian or Gaussian peaks over a constant background.
/// Parameters: peak<k>.center, peak<k>.fwhm, peak<k>.amplitude ..., background.
/// Lorentzian FWHM = 2 gamma; Gaussian FWHM = 2 sqrt(2 ln 2) sigma.
class PeakSumModel final : public CurveModel {
 public:
  PeakSumModel(PeakShape shape, int n_peaks);

  std::vector<std::string> parameter_names() const override;
  void evaluate(std::span<const double> x, std::span<const double> p, std::span<double> y,
                Eigen::MatrixXd* jac) const override;
  std::vector<double> natural_scales(std::span<const double> p) const override;

  PeakShape shape() const { return shape_; }
  int n_peaks() const { return n_peaks_; }

  /// Area under one peak given its FWHM and height.
  static double area(PeakShape shape, double fwhm, double amplitude);

 private:
  PeakShape shape_;
  int n_peaks_;
};

/// Parameters: b, c, tau1, tau2 (ns).
class G2Model final : public CurveModel {
 public:
  std::vector<std::string> parameter_names() const override;
  void evaluate(std::span<const double> x, std::span<const double> p, std::span<double> y,
                Eigen::MatrixXd* jac) const override;
  std::vector<double> natural_scales(std::span<const double> p) const override;
};

/// Half-wave-plate polarization scan: I(theta) = A cos^2(2(theta - theta0)) + I0.
/// x in degrees; parameters amplitude, theta0 (radians), offset.
class MalusModel final : public CurveModel {
 public:
  std::vector<std::string> parameter_names() const override;
  void evaluate(std::span<const double> x, std::span<const double> p, std::span<double> y,
                Eigen::MatrixXd* jac) const override;
};

}  // namespace snvkit
