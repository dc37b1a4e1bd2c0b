#include "snvkit/alpha.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "snvkit/errors.hpp"

namespace snvkit {

LineSelection parse_line_selection(std::string_view text) {
  if (text == "all") return LineSelection::All;
  if (text == "inner") return LineSelection::Inner;
  if (text == "outer") return LineSelection::Outer;
  throw ConfigError("unknown line selection '" + std::string(text) + "'");
}

std::string to_string(LineSelection s) {
  switch (s) {
    case LineSelection::All: return "all";
    case LineSelection::Inner: return "inner";
    case LineSelection::Outer: return "outer";
  }
  return "?";
}

namespace {

struct FamilyPoint {
  std::size_t field_slot;  // index into the unique field list
  Family family;
  std::array<double, 4> centered;
};

struct Prepared {
  std::vector<double> fields;
  std::vector<FamilyPoint> points;
  std::vector<int> positions;  // which of the 4 centered positions enter the residual
};

Prepared prepare(const SweepTable& measured, const AlphaFitOptions& options) {
  Prepared prep;
  switch (options.lines) {
    case LineSelection::All: prep.positions = {0, 1, 2, 3}; break;
    case LineSelection::Inner: prep.positions = {1, 2}; break;
    case LineSelection::Outer: prep.positions = {0, 3}; break;
  }
  for (const auto& entry : measured.entries) {
    if (entry.field_tesla == 0.0) continue;
    bool used = false;
    for (Family fam : options.families) {
      std::array<std::optional<double>, 4> slots;
      for (const auto& line : entry.lines) {
        if (line.family == fam && line.index >= 0 && line.index < 4) {
          slots[static_cast<std::size_t>(line.index)] = line.offset_ghz;
        }
      }
      if (!std::all_of(slots.begin(), slots.end(), [](const auto& s) { return s.has_value(); })) {
        continue;
      }
      if (!used) {
        prep.fields.push_back(entry.field_tesla);
        used = true;
      }
      prep.points.push_back(
          {prep.fields.size() - 1, fam, pairwise_center({*slots[0], *slots[1], *slots[2], *slots[3]})});
    }
  }
  if (prep.fields.size() < 2) {
    throw InsufficientData("alpha fit needs at least two nonzero fields with complete families");
  }
  return prep;
}

// Model residuals (measured - model) for all prepared points.
void model_residuals(const Prepared& prep, const ManifoldParameters& ground,
                     const ManifoldParameters& excited, const PhysicalConstants& constants,
                     DefectOrientation orientation, const LabVector& direction, double alpha_g,
                     double alpha_u, std::span<double> r) {
  const auto g = ground.with_orbital_scale(alpha_g);
  const auto u = excited.with_orbital_scale(alpha_u);
  const double dn = direction.norm();
  std::vector<std::vector<TransitionLine>> per_field(prep.fields.size());
  for (std::size_t k = 0; k < prep.fields.size(); ++k) {
    const double s = prep.fields[k] / dn;
    const auto frame = field_in_defect_frame({direction.x * s, direction.y * s, direction.z * s},
                                             orientation);
    per_field[k] = raw_transitions(solve_manifold(g, constants, frame),
                                   solve_manifold(u, constants, frame));
  }
  std::size_t out = 0;
  for (const auto& pt : prep.points) {
    const auto fam = family_lines(per_field[pt.field_slot], pt.family);
    const auto model = pairwise_center(
        std::array<double, 4>{fam[0].offset_ghz, fam[1].offset_ghz, fam[2].offset_ghz, fam[3].offset_ghz});
    for (int pos : prep.positions) {
      r[out++] = model[static_cast<std::size_t>(pos)] - pt.centered[static_cast<std::size_t>(pos)];
    }
  }
}

}  // namespace

double alpha_objective(const SweepTable& measured, const ManifoldParameters& ground,
                       const ManifoldParameters& excited, const PhysicalConstants& constants,
                       DefectOrientation orientation, double alpha_g, double alpha_u,
                       const AlphaFitOptions& options) {
  const Prepared prep = prepare(measured, options);
  std::vector<double> r(prep.points.size() * prep.positions.size());
  model_residuals(prep, ground, excited, constants, orientation, options.direction, alpha_g,
                  alpha_u, r);
  double s = 0.0;
  for (double v : r) s += v * v;
  return s;
}

AlphaFit fit_alpha(const SweepTable& measured, const ManifoldParameters& ground,
                   const ManifoldParameters& excited, const PhysicalConstants& constants,
                   DefectOrientation orientation, const AlphaFitOptions& options) {
  ground.validate();
  excited.validate();
  constants.validate();
  auto prep = std::make_shared<const Prepared>(prepare(measured, options));

  ResidualProblem problem;
  problem.residual_count = prep->points.size() * prep->positions.size();
  problem.names = {"alpha_g", "alpha_u"};
  problem.analytic_jacobian = false;
  problem.evaluate = [prep, ground, excited, constants, orientation, dir = options.direction](
                         std::span<const double> p, std::span<double> r, Eigen::MatrixXd*) {
    model_residuals(*prep, ground, excited, constants, orientation, dir, p[0], p[1], r);
  };
  problem.scales = [](std::span<const double> p) {
    return std::vector<double>{std::fabs(p[0]), std::fabs(p[1])};
  };

  const double inf = std::numeric_limits<double>::infinity();
  const ParameterBounds bounds{{1e-6, 1e-6}, {inf, inf}};

  AlphaFit out;
  out.fit = solve_least_squares(problem, {1.0, 1.0}, bounds, options.solver);
  if (!out.fit.converged) {
    throw NotConverged("alpha fit did not converge in " + std::to_string(out.fit.iterations) +
                       " iterations");
  }
  out.alpha_g = out.fit.params[0];
  out.alpha_u = out.fit.params[1];
  out.alpha_g_err = out.fit.std_errors[0];
  out.alpha_u_err = out.fit.std_errors[1];
  out.rss_scaled = out.fit.rss;
  out.residual_count = problem.residual_count;
  out.fields_used = prep->fields.size();

  std::vector<double> r(problem.residual_count);
  model_residuals(*prep, ground, excited, constants, orientation, options.direction, 1.0, 1.0, r);
  out.rss_unscaled = 0.0;
  for (double v : r) out.rss_unscaled += v * v;
  return out;
}

}  // namespace snvkit
