#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "snvkit/errors.hpp"
#include "snvkit/transitions.hpp"

using namespace snvkit;

namespace {

struct OracleLine {
  double offset;
  double intensity;
};

// Lines of one family built from dense eigenpairs. Lower branch = two lowest.
std::vector<OracleLine> dense_family(const ManifoldParameters& g, const ManifoldParameters& u,
                                     const DefectFrameField& b, Family family) {
  const double bx = b.b_perp * std::cos(b.phi), by = b.b_perp * std::sin(b.phi);
  const auto eg = oracle::dense_eigen(oracle::dense_hamiltonian(g.lambda_so_ghz, g.f, g.delta_f, bx, by, b.b_axial));
  const auto eu = oracle::dense_eigen(oracle::dense_hamiltonian(u.lambda_so_ghz, u.f, u.delta_f, bx, by, b.b_axial));
  auto spin = [](const Eigen::Vector4cd& v) {
    Eigen::Vector2cd s = v.head<2>().norm() > v.tail<2>().norm() ? Eigen::Vector2cd(v.head<2>())
                                                                  : Eigen::Vector2cd(v.tail<2>());
    return Eigen::Vector2cd(s / s.norm());
  };
  const bool upper_u = family == Family::A || family == Family::B;
  const bool upper_g = family == Family::B || family == Family::D;
  std::vector<OracleLine> out;
  for (int i = upper_u ? 2 : 0; i < (upper_u ? 4 : 2); ++i) {
    for (int j = upper_g ? 2 : 0; j < (upper_g ? 4 : 2); ++j) {
      const auto ov = spin(eu.vectors.col(i)).dot(spin(eg.vectors.col(j)));
      out.push_back({eu.values[i] - eg.values[j], std::norm(ov)});
    }
  }
  std::sort(out.begin(), out.end(), [](auto& a, auto& c) { return a.offset > c.offset; });
  return out;
}

DefectFrameField field001(double b) {
  return field_in_defect_frame({0, 0, b}, DefectOrientation::Axis111);
}

std::vector<TransitionLine> table_at(double b) {
  const auto f = field001(b);
  return transition_table(solve_manifold(snv_ground(), {}, f), solve_manifold(snv_excited(), {}, f));
}

}  // namespace

TEST_SUITE("transitions") {
  TEST_CASE("zero-field offsets, merging and intensities") {
    const auto t = table_at(0.0);
    REQUIRE(t.size() == 4);
    const double want[4] = {1925.0, 1075.0, -1075.0, -1925.0};
    for (int k = 0; k < 4; ++k) {
      const auto fam = family_lines(t, kAllFamilies[k]);
      REQUIRE(fam.size() == 1);
      CHECK(fam[0].offset_ghz == doctest::Approx(want[k]).epsilon(1e-15));
      CHECK(fam[0].index == -1);
      CHECK(fam[0].intensity == doctest::Approx(1.0));
      CHECK(fam[0].multiplicity == 4);
    }
    const double c = family_lines(t, Family::C)[0].offset_ghz;
    const double d = family_lines(t, Family::D)[0].offset_ghz;
    CHECK(std::abs((c - d) - 850.0) < 1e-9);
  }

  TEST_CASE("9 T along [001]: four C and four D lines, conserving lines stronger") {
    const auto t = table_at(9.0);
    for (Family f : {Family::C, Family::D}) {
      const auto fam = family_lines(t, f);
      REQUIRE(fam.size() == 4);
      double min_cons = 1.0, max_flip = 0.0;
      int n_cons = 0;
      for (int i = 0; i < 4; ++i) {
        CHECK(fam[i].index == i);
        if (i > 0) CHECK(fam[i].offset_ghz < fam[i - 1].offset_ghz);
        CHECK(fam[i].intensity >= 0.0);
        CHECK(fam[i].intensity <= 1.0);
        if (fam[i].spin_conserving) {
          ++n_cons;
          min_cons = std::min(min_cons, fam[i].intensity);
        } else {
          max_flip = std::max(max_flip, fam[i].intensity);
        }
      }
      CHECK(n_cons == 2);
      CHECK(min_cons > max_flip);
    }
  }

  TEST_CASE("offsets and intensities match the dense oracle") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    for (int t = 0; t < 20; ++t) {
      const LabVector v{u(rng), u(rng), u(rng)};
      const auto b = field_in_defect_frame(v, DefectOrientation::Axis1Bar11);
      const auto raw = raw_transitions(solve_manifold(snv_ground(), {}, b), solve_manifold(snv_excited(), {}, b));
      for (Family f : kAllFamilies) {
        const auto got = family_lines(raw, f);
        const auto want = dense_family(snv_ground(), snv_excited(), b, f);
        REQUIRE(got.size() == 4);
        for (int i = 0; i < 4; ++i) {
          CHECK(std::abs(got[i].offset_ghz - want[i].offset) < 1e-8);
          CHECK(std::abs(got[i].intensity - want[i].intensity) < 1e-8);
        }
      }
    }
  }

  TEST_CASE("intensity sum rule over each ground spin doublet") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-9.0, 9.0);
    for (int t = 0; t < 30; ++t) {
      const auto b = field_in_defect_frame({u(rng), u(rng), u(rng)}, DefectOrientation::Axis111);
      const auto raw = raw_transitions(solve_manifold(snv_ground(), {}, b), solve_manifold(snv_excited(), {}, b));
      // Lower excited states feed C and D; upper feed A and B. The ground
      // doublet of orbital l is split across the two families.
      for (auto pair : {std::pair{Family::C, Family::D}, std::pair{Family::A, Family::B}}) {
        for (int le : {1, -1}) {
          for (int lg : {1, -1}) {
            double sum = 0.0;
            for (const auto& l : raw) {
              if ((l.family == pair.first || l.family == pair.second) &&
                  l.track == TrackId{le, lg}) {
                sum += l.intensity;
              }
            }
            CHECK(std::abs(sum - 1.0) < 1e-10);
          }
        }
      }
    }
  }

  TEST_CASE("pairwise centering examples") {
    auto c = pairwise_center(std::array<double, 4>{3, 1, -1, -3});
    CHECK(c == std::array<double, 4>{3, 1, -1, -3});
    c = pairwise_center(std::array<double, 4>{5, 2, 0, -3});
    CHECK(c == std::array<double, 4>{4, 1, -1, -4});
    for (double d : {0.25, -17.5, 1234.0}) {
      c = pairwise_center(std::array<double, 4>{3 + d, 1 + d, -1 + d, -3 + d});
      for (int k = 0; k < 4; ++k) CHECK(std::abs(c[k] - std::array<double, 4>{3, 1, -1, -3}[k]) < 1e-12);
    }
    const std::vector<double> three{1, 2, 3};
    CHECK_THROWS_AS(pairwise_center(std::span<const double>(three)), CountMismatch);
  }

  TEST_CASE("pairwise centering is idempotent and drift invariant") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-100.0, 100.0);
    for (int t = 0; t < 100; ++t) {
      std::array<double, 4> v{u(rng), u(rng), u(rng), u(rng)};
      std::sort(v.begin(), v.end(), std::greater<>());
      const auto c = pairwise_center(v);
      const auto cc = pairwise_center(c);
      const double d = u(rng);
      const auto cd = pairwise_center(std::array<double, 4>{v[0] + d, v[1] + d, v[2] + d, v[3] + d});
      for (int k = 0; k < 4; ++k) {
        CHECK(std::abs(cc[k] - c[k]) < 1e-12);
        CHECK(std::abs(cd[k] - c[k]) < 1e-12);
      }
      CHECK(std::abs(c[0] + c[3]) < 1e-12);
      CHECK(std::abs(c[1] + c[2]) < 1e-12);
    }
  }

  TEST_CASE("sweep of a single field reduces to one table") {
    const std::vector<double> f{4.0};
    const auto s = zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111);
    REQUIRE(s.entries.size() == 1);
    const auto t = table_at(4.0);
    REQUIRE(s.entries[0].lines.size() == t.size());
    for (std::size_t i = 0; i < t.size(); ++i) CHECK(s.entries[0].lines[i].offset_ghz == t[i].offset_ghz);
  }

  TEST_CASE("sweep rejects non-increasing fields") {
    const std::vector<double> f{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111), InvalidArgument);
  }

  TEST_CASE("line counts along the [001] sweep") {
    std::vector<double> f;
    for (int k = 0; k <= 18; ++k) f.push_back(0.5 * k);
    const auto s = zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111);
    for (const auto& e : s.entries) {
      for (Family fam : kAllFamilies) {
        const auto n = family_lines(e.lines, fam).size();
        CHECK(n == (e.field_tesla == 0.0 ? 1u : 4u));
      }
      CHECK(e.incomplete.empty());
    }
  }

  TEST_CASE("tracked curves are continuous and labeled at the top field") {
    std::vector<double> f;
    for (int k = 0; k <= 18; ++k) f.push_back(0.5 * k);
    const auto s = zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111);
    const double bound = 2.0 * oracle::kMuB * oracle::kGs * 0.5;
    for (Family fam : {Family::C, Family::D}) {
      const auto curves = tracked_curves(s, fam);
      REQUIRE(curves.size() == 4);
      const auto top = family_lines(s.entries.back().lines, fam);
      for (int i = 0; i < 4; ++i) {
        CHECK(curves[i].label() == std::string(1, to_char(fam)) + std::to_string(i));
        CHECK(curves[i].offsets_ghz.back() == doctest::Approx(top[i].offset_ghz));
        for (std::size_t k = 1; k < f.size(); ++k) {
          CHECK(std::abs(curves[i].offsets_ghz[k] - curves[i].offsets_ghz[k - 1]) < bound);
        }
      }
      for (std::size_t k = 0; k < f.size(); ++k) {
        CHECK(std::abs(curves[0].centered_ghz[k] + curves[3].centered_ghz[k]) < 1e-12);
        CHECK(std::abs(curves[1].centered_ghz[k] + curves[2].centered_ghz[k]) < 1e-12);
      }
    }
  }

  TEST_CASE("inner splittings are linear at small fields") {
    auto inner = [](double b) {
      const auto c = family_lines(table_at(b), Family::C);
      return c[1].offset_ghz - c[2].offset_ghz;
    };
    for (double b : {0.1, 0.25, 0.45}) {
      const double ratio = inner(2.0 * b) / inner(b);
      CHECK(std::abs(ratio - 2.0) / 2.0 < 0.05);
    }
  }

  TEST_CASE("family names") {
    for (Family f : kAllFamilies) CHECK(parse_family(std::string(1, to_char(f))) == f);
    CHECK_THROWS_AS(parse_family("E"), InvalidArgument);
  }
}
