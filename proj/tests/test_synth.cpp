#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "snvkit/fits.hpp"
#include "snvkit/synth.hpp"

using namespace snvkit;

namespace {

std::vector<TransitionLine> lines_at(double b, Family fam) {
  const auto f = field_in_defect_frame({0, 0, b}, DefectOrientation::Axis111);
  return family_lines(transition_table(solve_manifold(snv_ground(), {}, f), solve_manifold(snv_excited(), {}, f)), fam);
}

}  // namespace

TEST_SUITE("synth") {
  TEST_CASE("one noiseless line peaks at its offset") {
    TransitionLine l;
    l.offset_ghz = 3.14;
    l.intensity = 1.0;
    const std::vector<TransitionLine> lines{l};
    const auto grid = oracle::grid(-10.0, 10.0, 2001);
    const auto s = synth_spectrum(lines, 0.5, grid, {}, 0.0);
    const auto it = std::max_element(s.y.begin(), s.y.end());
    CHECK(std::abs(s.x[it - s.y.begin()] - 3.14) <= 0.5 * (grid[1] - grid[0]) + 1e-12);
    CHECK(*it == doctest::Approx(1.0).epsilon(1e-3));
  }

  TEST_CASE("fixed seed is bit-identical") {
    const auto lines = lines_at(9.0, Family::C);
    const auto grid = oracle::grid(-1130.0, -1020.0, 500);
    for (NoiseKind k : {NoiseKind::GaussianRelative, NoiseKind::GaussianAbsolute, NoiseKind::PoissonCounts}) {
      const NoiseSpec n{k, 0.1, 42};
      const auto a = synth_spectrum(lines, 0.5, grid, n, 10.0, 100.0);
      const auto b = synth_spectrum(lines, 0.5, grid, n, 10.0, 100.0);
      CHECK(a.y == b.y);
      const auto c = synth_spectrum(lines, 0.5, grid, {k, 0.1, 43}, 10.0, 100.0);
      CHECK(a.y != c.y);
    }
  }

  TEST_CASE("PRNG contract") {
    std::mt19937_64 ref(2024);
    FixtureRng rng(2024);
    for (int i = 0; i < 100; ++i) CHECK(rng.uniform() == static_cast<double>(ref() >> 11) * 0x1.0p-53);
    FixtureRng a(5), b(5);
    const double u1 = a.uniform(), u2 = a.uniform();
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));
    CHECK(b.normal() == doctest::Approx(r * std::cos(2.0 * oracle::kPi * u2)).epsilon(1e-15));
    CHECK(b.normal() == doctest::Approx(r * std::sin(2.0 * oracle::kPi * u2)).epsilon(1e-15));
  }

  TEST_CASE("C family at 9 T: inner splitting survives a double-Lorentzian fit") {
    const auto lines = lines_at(9.0, Family::C);
    const double inner = lines[1].offset_ghz - lines[2].offset_ghz;
    const double mid = 0.5 * (lines[1].offset_ghz + lines[2].offset_ghz);
    const auto grid = oracle::grid(mid - 2.0 * inner, mid + 2.0 * inner, 1201);
    const auto s = synth_spectrum(lines, 0.5, grid, {NoiseKind::GaussianAbsolute, 0.02, 3}, 0.0);
    const auto r = fit_lorentzian(s, 2);
    const double got = r.param("peak0.center") - r.param("peak1.center");
    CHECK(std::abs(got - inner) / inner < 0.03);
  }

  TEST_CASE("g2 traces") {
    const G2Params p{0.3, 0.77, 4.8, 103.0};
    const auto grid = oracle::grid(-500.0, 500.0, 2001);
    const auto s = synth_g2(p, grid, {});
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(s.y[i] == eval_g2(p, grid[i]));
      CHECK(s.y[i] == s.y[grid.size() - 1 - i]);
    }
    const auto it = std::min_element(s.y.begin(), s.y.end());
    CHECK(*it == doctest::Approx(0.23).epsilon(1e-14));
    CHECK(s.x[it - s.y.begin()] == 0.0);
  }

  TEST_CASE("noise-free Zeeman dataset equals the model sweep") {
    std::vector<double> f;
    for (int k = 0; k <= 18; ++k) f.push_back(0.5 * k);
    const auto a = synth_zeeman_dataset(1.0, 1.0, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111, {0, 0, 1}, f, 0.0, {}, 1);
    const auto b = zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      REQUIRE(a.entries[k].lines.size() == b.entries[k].lines.size());
      for (std::size_t i = 0; i < a.entries[k].lines.size(); ++i) {
        CHECK(a.entries[k].lines[i].offset_ghz == b.entries[k].lines[i].offset_ghz);
        CHECK(a.entries[k].lines[i].index == b.entries[k].lines[i].index);
      }
    }
  }

  TEST_CASE("drift is removed exactly by pairwise centering") {
    std::vector<double> f, drift;
    for (int k = 1; k <= 18; ++k) {
      f.push_back(0.5 * k);
      drift.push_back(3.0 * std::cos(0.7 * k) + 0.1 * k);
    }
    const auto a = synth_zeeman_dataset(1.0, 1.0, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111, {0, 0, 1}, f, 0.0, {}, 1);
    const auto b = synth_zeeman_dataset(1.0, 1.0, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111, {0, 0, 1}, f, 0.0, drift, 1);
    for (std::size_t k = 0; k < f.size(); ++k) {
      for (Family fam : {Family::C, Family::D}) {
        const auto la = family_lines(a.entries[k].lines, fam), lb = family_lines(b.entries[k].lines, fam);
        std::array<double, 4> va{}, vb{};
        for (int i = 0; i < 4; ++i) {
          va[i] = la[i].offset_ghz;
          vb[i] = lb[i].offset_ghz;
          CHECK(std::abs(vb[i] - va[i] - drift[k]) < 1e-9);
        }
        const auto ca = pairwise_center(va), cb = pairwise_center(vb);
        for (int i = 0; i < 4; ++i) CHECK(std::abs(ca[i] - cb[i]) < 1e-12);
      }
    }
  }

  TEST_CASE("Gaussian noise statistics") {
    std::vector<double> v(20000, 7.0);
    apply_noise(v, {NoiseKind::GaussianAbsolute, 0.3, 99});
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    const double sd = std::sqrt(var / (v.size() - 1));
    CHECK(std::abs(sd - 0.3) / 0.3 < 0.05);
    CHECK(std::abs(mean - 7.0) < 4.0 * 0.3 / std::sqrt(20000.0));

    std::vector<double> w(20000, -4.0);
    apply_noise(w, {NoiseKind::GaussianRelative, 0.1, 5});
    double var2 = 0.0;
    for (double x : w) var2 += (x + 4.0) * (x + 4.0);
    CHECK(std::abs(std::sqrt(var2 / w.size()) - 0.4) / 0.4 < 0.05);
  }

  TEST_CASE("Poisson counts") {
    for (double mean : {0.5, 3.0, 9.5, 10.0, 37.0, 1500.0}) {
      const std::size_t n = 40000;
      std::vector<double> v(n, mean);
      apply_noise(v, {NoiseKind::PoissonCounts, 0.0, 123});
      double sum = 0.0, sq = 0.0;
      for (double x : v) {
        CHECK(x >= 0.0);
        CHECK(x == std::floor(x));
        sum += x;
        sq += x * x;
      }
      const double m = sum / n;
      CHECK(std::abs(m - mean) < 3.0 * std::sqrt(mean / n));
      const double var = sq / n - m * m;
      CHECK(std::abs(var - mean) / mean < 0.05);
    }
  }

  TEST_CASE("noise kind names") {
    for (NoiseKind k : {NoiseKind::None, NoiseKind::GaussianRelative, NoiseKind::GaussianAbsolute, NoiseKind::PoissonCounts}) {
      CHECK(parse_noise_kind(to_string(k)) == k);
    }
  }
}
