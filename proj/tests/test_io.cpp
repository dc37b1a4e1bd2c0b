#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "snvkit/config.hpp"
#include "snvkit/errors.hpp"
#include "snvkit/io.hpp"
#include "snvkit/report.hpp"
#include "snvkit/synth.hpp"

using namespace snvkit;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("snvkit_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("wavelength conversion") {
    CHECK(io::wavelength_to_frequency_ghz(299.792458) == 1e6);
    CHECK(io::wavelength_to_frequency_ghz(620.0) == 299792458.0 / 620.0);
    CHECK(std::abs(io::wavelength_to_frequency_ghz(620.0) - 483536.0) < 1.0);
    for (double nm : {400.0, 619.0, 620.0, 1550.0, 299792.458}) {
      const double back = io::frequency_to_wavelength_nm(io::wavelength_to_frequency_ghz(nm));
      CHECK(std::abs(back - nm) / nm < 1e-12);
    }
    CHECK_THROWS_AS(io::wavelength_to_frequency_ghz(0.0), NonPositiveWavelength);
    CHECK_THROWS_AS(io::wavelength_to_frequency_ghz(-5.0), NonPositiveWavelength);
  }

  TEST_CASE("minimal spectrum") {
    const auto s = io::parse_spectrum("# GHz,counts\n0.0,10\n0.1,12\n", io::SpectrumFormat::FreqCounts);
    CHECK(s.size() == 2);
    CHECK(s.y[1] == 12.0);
    CHECK_FALSE(s.sigma.has_value());
    const auto t = io::parse_spectrum("0,1,0.5\n1,2,0.25\n", io::SpectrumFormat::FreqCounts);
    REQUIRE(t.sigma.has_value());
    CHECK((*t.sigma)[1] == 0.25);
  }

  TEST_CASE("spectrum errors") {
    try {
      io::parse_spectrum("# h\n0.0,10\n0.1,abc\n", io::SpectrumFormat::FreqCounts);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    CHECK_THROWS_AS(io::parse_spectrum("# only a header\n", io::SpectrumFormat::FreqCounts), EmptySeries);
    CHECK_THROWS_AS(io::parse_spectrum("0,1\n2,1\n1,1\n", io::SpectrumFormat::FreqCounts), NonMonotonicAxis);
    CHECK_THROWS_AS(io::parse_spectrum("0,1\n1,1,1\n", io::SpectrumFormat::FreqCounts), ParseError);
    CHECK_THROWS_AS(io::parse_spectrum("0,1\n1,nan\n", io::SpectrumFormat::FreqCounts), ParseError);
    CHECK_THROWS_AS(io::parse_spectrum("-5,1\n600,1\n", io::SpectrumFormat::WavelengthCounts), NonPositiveWavelength);
    CHECK_THROWS_AS(io::load_spectrum("/nonexistent/file.csv", io::SpectrumFormat::FreqCounts), IoError);
  }

  TEST_CASE("increasing wavelength gives decreasing frequency") {
    const auto s = io::parse_spectrum("618.0,1\n619.0,2\n620.0,3\n621.5,1\n", io::SpectrumFormat::WavelengthCounts);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s.x[i] < s.x[i - 1]);
    CHECK(s.x[2] == 299792458.0 / 620.0);
  }

  TEST_CASE("spectrum round trip") {
    SpectrumSeries s;
    s.x = {0.1, 1.0 / 3.0, 2.0 / 7.0 + 1.0};
    s.y = {1e-300, -2.5e17, 3.141592653589793};
    s.sigma = std::vector<double>{0.1, 0.2, 1.0 / 9.0};
    const auto back = io::parse_spectrum(io::format_spectrum(s, "GHz", "counts"), io::SpectrumFormat::FreqCounts);
    CHECK(back.x == s.x);
    CHECK(back.y == s.y);
    CHECK(*back.sigma == *s.sigma);
  }

  TEST_CASE("minimal sweep and incomplete families") {
    auto t = io::parse_sweep("# B_tesla,family,line_index,offset_ghz\n2,C,0,1\n2,C,1,0.5\n2,C,2,-0.5\n2,C,3,-1\n");
    REQUIRE(t.entries.size() == 1);
    CHECK(t.source == SweepSource::Measured);
    CHECK(t.entries[0].incomplete.empty());
    t = io::parse_sweep("1,C,0,1\n1,C,1,0.5\n1,C,3,-1\n0,C,-1,-1075\n");
    REQUIRE(t.entries.size() == 2);
    CHECK(t.entries[0].field_tesla == 0.0);
    REQUIRE(t.entries[1].incomplete.size() == 1);
    CHECK(t.entries[1].incomplete[0] == Family::C);
  }

  TEST_CASE("sweep errors") {
    CHECK_THROWS_AS(io::parse_sweep("1,C,0,1\n1,C,0,2\n"), DuplicateLine);
    CHECK_THROWS_AS(io::parse_sweep("1,E,0,1\n"), ParseError);
    CHECK_THROWS_AS(io::parse_sweep("1,C,4,1\n"), ParseError);
    CHECK_THROWS_AS(io::parse_sweep("1,C,0\n"), ParseError);
    CHECK_THROWS_AS(io::parse_sweep("0,C,-1,1\n0,C,0,2\n"), ParseError);
  }

  TEST_CASE("synthetic sweep round trips losslessly") {
    std::vector<double> f;
    for (int k = 0; k <= 18; ++k) f.push_back(0.5 * k);
    const auto t = synth_zeeman_dataset(0.98, 1.32, snv_ground(), snv_excited(), {}, DefectOrientation::Axis111,
                                        {0, 0, 1}, f, 0.5, {}, 77);
    const std::string text = io::format_sweep(t);
    const auto back = io::parse_sweep(text);
    REQUIRE(back.entries.size() == t.entries.size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      CHECK(back.entries[k].field_tesla == t.entries[k].field_tesla);
      for (Family fam : kAllFamilies) {
        const auto a = family_lines(t.entries[k].lines, fam), b = family_lines(back.entries[k].lines, fam);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
          CHECK(a[i].offset_ghz == b[i].offset_ghz);
          CHECK(a[i].index == b[i].index);
          CHECK(a[i].sigma_ghz == b[i].sigma_ghz);
        }
      }
    }
    CHECK(io::format_sweep(back) == text);
  }

  TEST_CASE("plot data: one column per tracked line") {
    std::vector<double> f{0.0, 1.0, 2.0};
    const auto s = zeeman_sweep(snv_ground(), snv_excited(), {}, f, {0, 0, 1}, DefectOrientation::Axis111);
    const auto p = io::sweep_plot_table(s, {Family::C, Family::D});
    CHECK(p.headers.size() == 1 + 2 * 4 * 2);
    CHECK(p.headers[0] == "B_tesla");
    CHECK(p.headers[1] == "C0");
    CHECK(p.headers[2] == "C0_centered");
    const std::string text = io::format_plot_data(p);
    CHECK(text.rfind("# B_tesla\tC0\t", 0) == 0);
    CHECK(text.find("e+00") != std::string::npos);
    const auto dir = scratch("plot");
    io::emit_plot_data(p, dir / "a.tsv");
    io::emit_plot_data(p, dir / "b.tsv");
    CHECK(io::read_file(dir / "a.tsv") == io::read_file(dir / "b.tsv"));
    CHECK(std::stod("1.00000000000000000e+00") == 1.0);
  }

  TEST_CASE("number formatting is lossless") {
    for (double v : {0.1, 1.0 / 3.0, -1e-300, 6.02214076e23, 2.0023}) {
      CHECK(std::stod(io::format_double(v)) == v);
      CHECK(std::stod(io::format_scientific(v)) == v);
    }
  }

  TEST_CASE("config: parsing, overrides and echo") {
    RunConfig cfg;
    cfg.load_text("# comment\nground.lambda_so_ghz = 900\nconstants.g_s=2.0\norientation=1-11\nseed=18446744073709551615\n");
    CHECK(cfg.ground.lambda_so_ghz == 900.0);
    CHECK(cfg.constants.g_s == 2.0);
    CHECK(cfg.orientation == DefectOrientation::Axis1Bar11);
    CHECK(cfg.seed == 18446744073709551615ull);
    RunConfig again;
    again.load_text(cfg.echo());
    CHECK(again.entries() == cfg.entries());
    CHECK_THROWS_AS(cfg.set("ground.lambda", "1"), ConfigError);
    CHECK_THROWS_AS(cfg.set("seed", "-1"), ConfigError);
    CHECK_THROWS_AS(cfg.load_text("no equals sign\n"), ConfigError);
    RunConfig bad;
    bad.set("constants.g_s", "3");
    CHECK_THROWS_AS(bad.validate(), Error);
    CHECK(parse_double_list("1, 2.5,-3") == std::vector<double>{1.0, 2.5, -3.0});
    CHECK(parse_double_list("").empty());
  }

  TEST_CASE("report layout is stable") {
    io::Report r;
    r.command = "demo";
    r.config = {{"a", "1"}, {"b", "2"}};
    r.payload["z"] = 1;
    r.payload["a"] = std::numeric_limits<double>::infinity();
    const std::string text = io::format_report(r);
    CHECK(text == io::format_report(r));
    const auto j = nlohmann::ordered_json::parse(text);
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    CHECK(keys == std::vector<std::string>{"tool", "version", "command", "inputs", "config", "result"});
    CHECK(j["result"].begin().key() == "z");
    CHECK(j["result"]["a"].is_null());
  }

  TEST_CASE("file digests") {
    CHECK(io::fnv1a64_hex("") == "cbf29ce484222325");
    CHECK(io::fnv1a64_hex("a") == "af63dc4c8601ec8c");
  }
}
