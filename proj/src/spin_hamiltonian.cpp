#include "snvkit/spin_hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "snvkit/errors.hpp"

namespace snvkit {

void ManifoldParameters::validate() const {
  if (!(lambda_so_ghz > 0.0) || !std::isfinite(lambda_so_ghz)) {
    throw ConfigError("spin-orbit constant must be positive and finite, got " +
                      std::to_string(lambda_so_ghz));
  }
  if (!std::isfinite(f) || !std::isfinite(delta_f)) {
    throw ConfigError("orbital Zeeman factors must be finite");
  }
}

ManifoldParameters ManifoldParameters::with_orbital_scale(double alpha) const {
  ManifoldParameters out = *this;
  out.f *= alpha;
  out.delta_f *= alpha;
  return out;
}

ManifoldParameters snv_ground() { return {Parity::Gerade, 850.0, 0.154, 0.014}; }

ManifoldParameters snv_excited() { return {Parity::Ungerade, 3000.0, 0.098, 0.238}; }

void PhysicalConstants::validate() const {
  if (!(mu_b_over_h > 0.0) || !std::isfinite(mu_b_over_h)) {
    throw ConfigError("mu_B/h must be positive");
  }
  if (!(g_s >= 1.9 && g_s <= 2.1)) {
    throw ConfigError("g_S must lie in [1.9, 2.1], got " + std::to_string(g_s));
  }
}

double ManifoldHamiltonian::trace() const {
  return m[0][0].real() + m[1][1].real() + m[2][2].real() + m[3][3].real();
}

double ManifoldHamiltonian::max_abs() const {
  double out = 0.0;
  for (const auto& row : m) {
    for (const auto& v : row) out = std::max(out, std::abs(v));
  }
  return out;
}

std::array<double, 4> EigenSystem::energies() const {
  return {states[0].energy, states[1].energy, states[2].energy, states[3].energy};
}

const EigenState& EigenSystem::state(Branch branch, int orbital) const {
  for (const auto& s : states) {
    if (s.branch == branch && s.orbital == orbital) return s;
  }
  throw InvalidArgument("eigen-system has no state for requested branch/orbital");
}

ManifoldHamiltonian build_hamiltonian(const ManifoldParameters& p, const PhysicalConstants& c,
                                      const DefectFrameField& b) {
  const double mu = c.mu_b_over_h;
  const double bx = b.b_perp * std::cos(b.phi);
  const double by = b.b_perp * std::sin(b.phi);
  const double bz = b.b_axial;

  ManifoldHamiltonian h;
  // <up| S.B_perp |dn> = (B_x - i B_y) / 2
  const Complex transverse = 0.5 * mu * c.g_s * Complex(bx, -by);
  for (int block = 0; block < 2; ++block) {
    const double l = block == 0 ? 1.0 : -1.0;
    const int up = 2 * block;
    const int dn = up + 1;
    for (int k = 0; k < 2; ++k) {
      const double s = k == 0 ? 0.5 : -0.5;
      const double diag = -p.lambda_so_ghz * l * s + mu * p.f * l * bz + mu * c.g_s * s * bz +
                          2.0 * mu * p.delta_f * s * bz;
      h.m[up + k][up + k] = diag;
    }
    h.m[up][dn] = transverse;
    h.m[dn][up] = std::conj(transverse);
  }
  return h;
}

namespace {

struct BlockEigen {
  double energy;
  std::array<Complex, 2> spin;
};

// Rotates the phase so the dominant component is real and positive.
std::array<Complex, 2> fix_phase(std::array<Complex, 2> v) {
  const Complex pivot = std::abs(v[0]) >= std::abs(v[1]) ? v[0] : v[1];
  const Complex phase = std::conj(pivot) / std::abs(pivot);
  return {v[0] * phase, v[1] * phase};
}

// Closed-form diagonalization of [[a, w], [conj(w), d]], ascending order.
std::array<BlockEigen, 2> diagonalize_block(double a, double d, Complex w) {
  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double abs_w = std::abs(w);
  const double r = std::hypot(half_diff, abs_w);
  const double t = std::atan2(abs_w, half_diff);
  const Complex phase = abs_w > 0.0 ? w / abs_w : Complex(1.0, 0.0);
  const double ch = std::cos(0.5 * t);
  const double sh = std::sin(0.5 * t);
  const std::array<Complex, 2> upper{ch, std::conj(phase) * sh};
  const std::array<Complex, 2> lower{-phase * sh, ch};
  return {BlockEigen{mean - r, fix_phase(lower)}, BlockEigen{mean + r, fix_phase(upper)}};
}

}  // namespace

EigenSystem eigensystem(const ManifoldHamiltonian& h, const ManifoldParameters& p) {
  std::array<EigenState, 4> unsorted{};
  for (int block = 0; block < 2; ++block) {
    const int up = 2 * block;
    const auto pair = diagonalize_block(h.m[up][up].real(), h.m[up + 1][up + 1].real(),
                                        h.m[up][up + 1]);
    for (int k = 0; k < 2; ++k) {
      EigenState& s = unsorted[2 * block + k];
      s.energy = pair[k].energy;
      s.orbital = block == 0 ? 1 : -1;
      s.spin = pair[k].spin;
      s.vector = {};
      s.vector[up] = s.spin[0];
      s.vector[up + 1] = s.spin[1];
    }
  }
  std::stable_sort(unsorted.begin(), unsorted.end(),
                   [](const EigenState& x, const EigenState& y) { return x.energy < y.energy; });

  EigenSystem es;
  es.states = unsorted;
  for (int i = 0; i < 4; ++i) es.states[i].branch = i < 2 ? Branch::Lower : Branch::Upper;

  if (es.states[0].orbital == es.states[1].orbital) {
    throw BranchAmbiguity("both lower-branch states fall in the same orbital block");
  }
  const double limit = 0.5 * p.lambda_so_ghz;
  const double split = std::max(zeeman_sublevel_splitting(es, Branch::Lower),
                                zeeman_sublevel_splitting(es, Branch::Upper));
  if (split >= limit) {
    throw BranchAmbiguity("Zeeman splitting " + std::to_string(split) +
                          " GHz reaches half the spin-orbit splitting");
  }
  return es;
}

EigenSystem solve_manifold(const ManifoldParameters& p, const PhysicalConstants& c,
                           const DefectFrameField& b) {
  return eigensystem(build_hamiltonian(p, c, b), p);
}

double zeeman_sublevel_splitting(const EigenSystem& es, Branch branch) {
  const int first = branch == Branch::Lower ? 0 : 2;
  return es.states[first + 1].energy - es.states[first].energy;
}

}  // namespace snvkit
