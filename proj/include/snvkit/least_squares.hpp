#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "snvkit/series.hpp"

namespace snvkit {

struct ParameterBounds {
  std::vector<double> lower;
  std::vector<double> upper;

  static ParameterBounds unbounded(std::size_t n);
};

struct FitOptions {
  int max_iterations = 200;
  double rss_rel_tol = 1e-10;
  double step_rel_tol = 1e-12;
  /// Relative eigenvalue of the scaled curvature below which a direction is
  /// treated as unconstrained.
  double rank_tol = 1e-10;
};

/// Quantity computed from fitted parameters, with linearly propagated error.
struct DerivedValue {
  std::string name;
  double value = 0.0;
  double std_error = 0.0;
};

struct FitResult {
  std::vector<std::string> names;
  std::vector<double> params;
  std::vector<double> std_errors;     // +inf for unconstrained parameters
  std::vector<double> covariance;     // row-major n x n, already scaled by rss/(m-n)
  double rss = 0.0;
  bool converged = false;
  int iterations = 0;
  std::size_t n_points = 0;
  std::vector<std::string> unconstrained;
  std::vector<std::string> warnings;
  std::vector<DerivedValue> derived;

  std::size_t index_of(std::string_view name) const;
  double param(std::string_view name) const { return params[index_of(name)]; }
  double error(std::string_view name) const { return std_errors[index_of(name)]; }
  double cov(std::size_t i, std::size_t j) const { return covariance[i * names.size() + j]; }
  const DerivedValue& derived_value(std::string_view name) const;
  bool is_unconstrained(std::string_view name) const;
};

/// Residual vector r(p) with optional Jacobian dr/dp (m x n).
struct ResidualProblem {
  std::size_t residual_count = 0;
  std::vector<std::string> names;
  /// Must fill `r`; fills `jac` when non-null and `analytic_jacobian` is set.
  std::function<void(std::span<const double> p, std::span<double> r, Eigen::MatrixXd* jac)>
      evaluate;
  bool analytic_jacobian = true;
  /// Natural size of a meaningful change of each parameter at p, used for
  /// rank detection. Defaults to Jacobian column normalization.
  std::function<std::vector<double>(std::span<const double> p)> scales;
};

/// Damped Gauss-Newton (Levenberg-Marquardt, Marquardt diagonal scaling)
/// with box constraints applied by projection. Accepted steps never increase
/// rss. Non-convergence is reported through `converged`, not thrown.
/// Throws SingularCurvature if the initial Jacobian is identically zero or
/// not finite.
FitResult solve_least_squares(const ResidualProblem& problem, std::vector<double> init,
                              const ParameterBounds& bounds, const FitOptions& options = {});

/// Parametric curve y = f(x; p).
class CurveModel {
 public:
  virtual ~CurveModel() = default;
  virtual std::vector<std::string> parameter_names() const = 0;
  /// Fills y (size x.size()) and, if non-null, the x.size() x n Jacobian.
  virtual void evaluate(std::span<const double> x, std::span<const double> p, std::span<double> y,
                        Eigen::MatrixXd* jac) const = 0;
  /// See ResidualProblem::scales. Empty result means column normalization.
  virtual std::vector<double> natural_scales(std::span<const double> /*p*/) const { return {}; }
};

/// Fits `model` to `data`, weighting residuals by 1/sigma when present.
FitResult least_squares(const CurveModel& model, const SpectrumSeries& data,
                        std::vector<double> init, const ParameterBounds& bounds,
                        const FitOptions& options = {});

}  // namespace snvkit
