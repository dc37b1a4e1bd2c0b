#pragma once

#include <array>
#include <complex>

#include "snvkit/geometry.hpp"

namespace snvkit {

using Complex = std::complex<double>;

enum class Parity { Gerade, Ungerade };

/// Spin-orbit and orbital-Zeeman constants of one manifold. Energies in GHz.
struct ManifoldParameters {
  Parity parity = Parity::Gerade;
  double lambda_so_ghz = 0.0;
  double f = 0.0;        // orbital Zeeman reduction factor
  double delta_f = 0.0;  // anisotropic spin Zeeman correction

  void validate() const;

  /// f and delta_f are both proportional to the orbital g-factor, so a
  /// rescaled g-factor multiplies both.
  ManifoldParameters with_orbital_scale(double alpha) const;
};

/// Tin-vacancy ground (gerade) manifold.
ManifoldParameters snv_ground();
/// Tin-vacancy excited (ungerade) manifold.
ManifoldParameters snv_excited();

struct PhysicalConstants {
  double mu_b_over_h = 13.996245;  // GHz / T
  double g_s = 2.0023;

  void validate() const;
};

/// 4x4 Hamiltonian in the product basis {|e+ up>, |e+ dn>, |e- up>, |e- dn>},
/// where e+/e- carry L_z = +1/-1 and up/dn carry S_z = +1/2 / -1/2.
struct ManifoldHamiltonian {
  std::array<std::array<Complex, 4>, 4> m{};

  Complex operator()(int i, int j) const { return m[i][j]; }
  double trace() const;
  double max_abs() const;
};

enum class Branch { Lower, Upper };

/// One eigenstate. Every eigenstate is an exact product of an orbital state
/// (L_z = orbital) and a two-component spinor.
struct EigenState {
  double energy = 0.0;  // GHz
  int orbital = 1;      // +1 or -1
  Branch branch = Branch::Lower;
  std::array<Complex, 2> spin{};    // (up, dn) amplitudes
  std::array<Complex, 4> vector{};  // full 4-component state
};

/// States sorted by ascending energy; states[0..1] form the lower spin-orbit
/// branch and states[2..3] the upper branch.
struct EigenSystem {
  std::array<EigenState, 4> states{};

  std::array<double, 4> energies() const;
  /// State of the given branch living in the given orbital block.
  const EigenState& state(Branch branch, int orbital) const;
};

ManifoldHamiltonian build_hamiltonian(const ManifoldParameters& p, const PhysicalConstants& c,
                                      const DefectFrameField& b);

/// Exact diagonalization of the two orbital blocks. Throws BranchAmbiguity
/// when Zeeman splitting within a branch reaches lambda/2, since sorting by
/// energy no longer identifies the spin-orbit branches.
EigenSystem eigensystem(const ManifoldHamiltonian& h, const ManifoldParameters& p);

EigenSystem solve_manifold(const ManifoldParameters& p, const PhysicalConstants& c,
                           const DefectFrameField& b);

/// E_upper - E_lower within one branch, always >= 0.
double zeeman_sublevel_splitting(const EigenSystem& es, Branch branch);

}  // namespace snvkit
