#include <doctest.h>

#include <cmath>
#include <vector>

#include "snvkit/alpha.hpp"
#include "snvkit/errors.hpp"
#include "snvkit/synth.hpp"

using namespace snvkit;

namespace {

std::vector<double> fields_half_to_nine() {
  std::vector<double> f;
  for (int k = 1; k <= 18; ++k) f.push_back(0.5 * k);
  return f;
}

SweepTable dataset(double ag, double au, double jitter, std::vector<double> drift, std::uint64_t seed) {
  const auto f = fields_half_to_nine();
  return synth_zeeman_dataset(ag, au, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111,
                              {0, 0, 1}, f, jitter, drift, seed);
}

AlphaFit fit(const SweepTable& t, AlphaFitOptions o = {}) {
  return fit_alpha(t, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111, o);
}

}  // namespace

TEST_SUITE("alpha") {
  TEST_CASE("self-consistency at alpha = (1, 1)") {
    const auto r = fit(dataset(1.0, 1.0, 0.0, {}, 1));
    CHECK(std::abs(r.alpha_g - 1.0) < 1e-6);
    CHECK(std::abs(r.alpha_u - 1.0) < 1e-6);
    CHECK(r.rss_unscaled < 1e-18);
    CHECK(r.fields_used == 18);
    CHECK(r.residual_count == 18 * 8);
  }

  TEST_CASE("noiseless recovery away from one") {
    const auto r = fit(dataset(0.9, 1.2, 0.0, {}, 1));
    CHECK(std::abs(r.alpha_g - 0.9) < 1e-6);
    CHECK(std::abs(r.alpha_u - 1.2) < 1e-6);
  }

  TEST_CASE("round trip with 0.5 GHz jitter") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
      const auto r = fit(dataset(0.98, 1.32, 0.5, {}, seed));
      CHECK(std::abs(r.alpha_g - 0.98) / 0.98 < 0.02);
      CHECK(std::abs(r.alpha_u - 1.32) / 1.32 < 0.02);
      CHECK(r.rss_scaled < r.rss_unscaled);
      CHECK(r.alpha_g_err > 0.0);
    }
  }

  TEST_CASE("per-field drift leaves the fit unchanged") {
    std::vector<double> drift;
    for (int k = 0; k < 18; ++k) drift.push_back(5.0 * std::sin(1.3 * k) - 2.0 * k);
    const auto a = fit(dataset(0.98, 1.32, 0.5, {}, 7));
    const auto b = fit(dataset(0.98, 1.32, 0.5, drift, 7));
    CHECK(b.alpha_g == doctest::Approx(a.alpha_g).epsilon(1e-9));
    CHECK(b.alpha_u == doctest::Approx(a.alpha_u).epsilon(1e-9));
    CHECK(b.rss_scaled == doctest::Approx(a.rss_scaled).epsilon(1e-7));
  }

  TEST_CASE("optimum has nonnegative curvature along both axes") {
    const auto t = dataset(0.98, 1.32, 0.5, {}, 11);
    const auto r = fit(t);
    auto obj = [&](double g, double u) {
      return alpha_objective(t, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111, g, u);
    };
    const double h = 1e-3;
    const double f0 = obj(r.alpha_g, r.alpha_u);
    CHECK(f0 == doctest::Approx(r.rss_scaled).epsilon(1e-9));
    CHECK(obj(r.alpha_g + h, r.alpha_u) - 2 * f0 + obj(r.alpha_g - h, r.alpha_u) >= 0.0);
    CHECK(obj(r.alpha_g, r.alpha_u + h) - 2 * f0 + obj(r.alpha_g, r.alpha_u - h) >= 0.0);
    CHECK(obj(1.0, 1.0) == doctest::Approx(r.rss_unscaled).epsilon(1e-12));
  }

  TEST_CASE("inner and outer line selections") {
    const auto t = dataset(0.95, 1.1, 0.0, {}, 1);
    for (auto sel : {LineSelection::Inner, LineSelection::Outer}) {
      AlphaFitOptions o;
      o.lines = sel;
      const auto r = fit(t, o);
      CHECK(r.residual_count == 18 * 4);
      CHECK(std::abs(r.alpha_g - 0.95) < 1e-5);
      CHECK(std::abs(r.alpha_u - 1.1) < 1e-5);
    }
    CHECK(parse_line_selection("inner") == LineSelection::Inner);
    CHECK_THROWS_AS(parse_line_selection("middle"), Error);
  }

  TEST_CASE("too few fields") {
    const std::vector<double> f{0.0, 3.0};
    const auto t = synth_zeeman_dataset(1.0, 1.0, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111,
                                        {0, 0, 1}, f, 0.0, {}, 1);
    CHECK_THROWS_AS(fit(t), InsufficientData);
  }
}
