#include "snvkit/least_squares.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "snvkit/errors.hpp"

namespace snvkit {

ParameterBounds ParameterBounds::unbounded(std::size_t n) {
  const double inf = std::numeric_limits<double>::infinity();
  return {std::vector<double>(n, -inf), std::vector<double>(n, inf)};
}

std::size_t FitResult::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return i;
  }
  throw InvalidArgument("fit has no parameter '" + std::string(name) + "'");
}

const DerivedValue& FitResult::derived_value(std::string_view name) const {
  for (const auto& d : derived) {
    if (d.name == name) return d;
  }
  throw InvalidArgument("fit has no derived value '" + std::string(name) + "'");
}

bool FitResult::is_unconstrained(std::string_view name) const {
  return std::find(unconstrained.begin(), unconstrained.end(), name) != unconstrained.end();
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct Evaluation {
  VectorXd r;
  MatrixXd jac;
  double rss = 0.0;
};

void numeric_jacobian(const ResidualProblem& problem, std::span<const double> p, MatrixXd& jac) {
  const std::size_t n = p.size();
  const std::size_t m = problem.residual_count;
  std::vector<double> work(p.begin(), p.end());
  VectorXd plus(m), minus(m);
  for (std::size_t j = 0; j < n; ++j) {
    const double h = 6.0e-6 * std::max(std::fabs(p[j]), 1.0);
    work[j] = p[j] + h;
    problem.evaluate(work, std::span<double>(plus.data(), m), nullptr);
    work[j] = p[j] - h;
    problem.evaluate(work, std::span<double>(minus.data(), m), nullptr);
    work[j] = p[j];
    jac.col(static_cast<Eigen::Index>(j)) = (plus - minus) / (2.0 * h);
  }
}

Evaluation evaluate(const ResidualProblem& problem, const std::vector<double>& p, bool with_jac) {
  Evaluation ev;
  const auto m = static_cast<Eigen::Index>(problem.residual_count);
  ev.r.resize(m);
  if (with_jac) {
    ev.jac.resize(m, static_cast<Eigen::Index>(p.size()));
    if (problem.analytic_jacobian) {
      problem.evaluate(p, std::span<double>(ev.r.data(), ev.r.size()), &ev.jac);
    } else {
      problem.evaluate(p, std::span<double>(ev.r.data(), ev.r.size()), nullptr);
      numeric_jacobian(problem, p, ev.jac);
    }
  } else {
    problem.evaluate(p, std::span<double>(ev.r.data(), ev.r.size()), nullptr);
  }
  ev.rss = ev.r.squaredNorm();
  return ev;
}

std::vector<double> project(std::vector<double> p, const ParameterBounds& b) {
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::clamp(p[i], b.lower[i], b.upper[i]);
  return p;
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Covariance, standard errors and rank-deficiency flags at the solution.
void finalize(const ResidualProblem& problem, const Evaluation& ev, const FitOptions& options,
              FitResult& out) {
  const auto n = static_cast<Eigen::Index>(out.params.size());
  const auto m = static_cast<Eigen::Index>(problem.residual_count);

  VectorXd scale(n);
  std::vector<double> natural;
  if (problem.scales) natural = problem.scales(out.params);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double cn = ev.jac.col(j).norm();
    if (!natural.empty()) {
      scale(j) = natural[static_cast<std::size_t>(j)];
    } else {
      scale(j) = cn > 0.0 ? 1.0 / cn : 1.0;
    }
  }
  const MatrixXd js = ev.jac * scale.asDiagonal();
  const MatrixXd curvature = js.transpose() * js;

  std::vector<bool> free(static_cast<std::size_t>(n), true);
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(curvature);
  const VectorXd evals = eig.eigenvalues();
  const double top = evals.size() > 0 ? evals(evals.size() - 1) : 0.0;
  for (Eigen::Index k = 0; k < evals.size(); ++k) {
    if (evals(k) > options.rank_tol * top && top > 0.0) continue;
    Eigen::Index worst = 0;
    eig.eigenvectors().col(k).cwiseAbs().maxCoeff(&worst);
    free[static_cast<std::size_t>(worst)] = false;
  }

  const double dof = m > n ? static_cast<double>(m - n) : 1.0;
  const double s2 = ev.rss / dof;
  out.covariance.assign(static_cast<std::size_t>(n * n), 0.0);
  out.std_errors.assign(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (free[static_cast<std::size_t>(j)]) {
      kept.push_back(j);
    } else {
      out.unconstrained.push_back(out.names[static_cast<std::size_t>(j)]);
    }
  }
  const auto k = static_cast<Eigen::Index>(kept.size());
  if (k == 0) return;
  MatrixXd sub(k, k);
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = curvature(kept[a], kept[b]);
  }
  const MatrixXd inv = sub.ldlt().solve(MatrixXd::Identity(k, k));
  for (Eigen::Index a = 0; a < k; ++a) {
    for (Eigen::Index b = 0; b < k; ++b) {
      const double c = inv(a, b) * scale(kept[a]) * scale(kept[b]) * s2;
      out.covariance[static_cast<std::size_t>(kept[a] * n + kept[b])] = c;
    }
    const double var = out.covariance[static_cast<std::size_t>(kept[a] * n + kept[a])];
    out.std_errors[static_cast<std::size_t>(kept[a])] = std::sqrt(std::max(var, 0.0));
  }
}

}  // namespace

FitResult solve_least_squares(const ResidualProblem& problem, std::vector<double> init,
                              const ParameterBounds& bounds, const FitOptions& options) {
  const std::size_t n = init.size();
  if (problem.names.size() != n || bounds.lower.size() != n || bounds.upper.size() != n) {
    throw InvalidArgument("parameter, name and bound counts differ");
  }
  if (problem.residual_count < n) {
    throw InsufficientData("fewer residuals than parameters");
  }

  std::vector<double> p = project(std::move(init), bounds);
  Evaluation cur = evaluate(problem, p, true);
  if (!std::isfinite(cur.rss) || !cur.jac.allFinite()) {
    throw SingularCurvature("residuals or Jacobian not finite at the initial point");
  }
  if (cur.jac.cwiseAbs().maxCoeff() == 0.0) {
    throw SingularCurvature("Jacobian is identically zero at the initial point");
  }

  FitResult out;
  out.names = problem.names;
  out.n_points = problem.residual_count;

  const auto ni = static_cast<Eigen::Index>(n);
  double damping = 1e-3;
  int attempts = 0;
  const int max_attempts = 20 * options.max_iterations;
  while (out.iterations < options.max_iterations && attempts < max_attempts) {
    ++attempts;
    if (cur.rss == 0.0) {
      out.converged = true;
      break;
    }
    const MatrixXd jtj = cur.jac.transpose() * cur.jac;
    const VectorXd grad = cur.jac.transpose() * cur.r;
    VectorXd diag = jtj.diagonal();
    const double dmax = std::max(diag.maxCoeff(), std::numeric_limits<double>::min());
    for (Eigen::Index j = 0; j < ni; ++j) diag(j) = std::max(diag(j), 1e-15 * dmax);

    MatrixXd a = jtj;
    a.diagonal() += damping * diag;
    Eigen::LDLT<MatrixXd> ldlt(a);
    const VectorXd delta = ldlt.solve(-grad);
    if (ldlt.info() != Eigen::Success || !delta.allFinite()) {
      damping *= 10.0;
      if (damping > 1e20) break;
      continue;
    }

    std::vector<double> trial(n);
    for (std::size_t j = 0; j < n; ++j) trial[j] = p[j] + delta(static_cast<Eigen::Index>(j));
    trial = project(std::move(trial), bounds);
    std::vector<double> step(n);
    for (std::size_t j = 0; j < n; ++j) step[j] = trial[j] - p[j];
    const double step_rel = norm(step) / (norm(p) + std::numeric_limits<double>::min());

    Evaluation next = evaluate(problem, trial, false);
    if (std::isfinite(next.rss) && next.rss <= cur.rss) {
      const double rel_change = (cur.rss - next.rss) / cur.rss;
      p = std::move(trial);
      cur = evaluate(problem, p, true);
      ++out.iterations;
      damping = std::max(damping / 3.0, 1e-15);
      if (rel_change < options.rss_rel_tol || step_rel < options.step_rel_tol) {
        out.converged = true;
        break;
      }
    } else {
      if (step_rel < options.step_rel_tol) {
        // No representable improvement remains along the damped direction.
        out.converged = true;
        break;
      }
      damping *= 4.0;
      if (damping > 1e20) break;
    }
  }

  // The rss test can stop while the step is still damped, which leaves a
  // parameter error of order sqrt(rss_rel_tol). One undamped Gauss-Newton
  // step removes it and is kept only if rss does not grow.
  if (out.converged && cur.rss > 0.0) {
    const MatrixXd jtj = cur.jac.transpose() * cur.jac;
    MatrixXd a = jtj;
    a.diagonal() += 1e-12 * jtj.diagonal();
    const VectorXd delta = a.ldlt().solve(-(cur.jac.transpose() * cur.r));
    if (delta.allFinite()) {
      std::vector<double> trial(n);
      for (std::size_t j = 0; j < n; ++j) trial[j] = p[j] + delta(static_cast<Eigen::Index>(j));
      trial = project(std::move(trial), bounds);
      Evaluation next = evaluate(problem, trial, true);
      if (std::isfinite(next.rss) && next.rss <= cur.rss && next.jac.allFinite()) {
        p = std::move(trial);
        cur = std::move(next);
      }
    }
  }

  out.params = p;
  out.rss = cur.rss;
  if (!cur.jac.allFinite()) {
    throw SingularCurvature("Jacobian not finite at the solution");
  }
  finalize(problem, cur, options, out);
  return out;
}

namespace {

class CurveResiduals {
 public:
  CurveResiduals(const CurveModel& model, const SpectrumSeries& data)
      : model_(model), data_(data), y_(data.size()) {
    if (data.sigma) {
      weights_.resize(data.size());
      for (std::size_t i = 0; i < data.size(); ++i) weights_[i] = 1.0 / (*data.sigma)[i];
    }
  }

  void operator()(std::span<const double> p, std::span<double> r, Eigen::MatrixXd* jac) {
    model_.evaluate(data_.x, p, y_, jac);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const double w = weights_.empty() ? 1.0 : weights_[i];
      r[i] = (y_[i] - data_.y[i]) * w;
    }
    if (jac != nullptr && !weights_.empty()) {
      for (Eigen::Index i = 0; i < jac->rows(); ++i) {
        jac->row(i) *= weights_[static_cast<std::size_t>(i)];
      }
    }
  }

 private:
  const CurveModel& model_;
  const SpectrumSeries& data_;
  std::vector<double> y_;
  std::vector<double> weights_;
};

}  // namespace

FitResult least_squares(const CurveModel& model, const SpectrumSeries& data,
                        std::vector<double> init, const ParameterBounds& bounds,
                        const FitOptions& options) {
  data.validate(init.size() + 1, false);
  auto residuals = std::make_shared<CurveResiduals>(model, data);
  ResidualProblem problem;
  problem.residual_count = data.size();
  problem.names = model.parameter_names();
  problem.evaluate = [residuals](std::span<const double> p, std::span<double> r,
                                 Eigen::MatrixXd* jac) { (*residuals)(p, r, jac); };
  problem.scales = [&model](std::span<const double> p) { return model.natural_scales(p); };
  return solve_least_squares(problem, std::move(init), bounds, options);
}

}  // namespace snvkit
