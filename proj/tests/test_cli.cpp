#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "snvkit/cli.hpp"
#include "snvkit/io.hpp"

namespace fs = std::filesystem;
using snvkit::cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "snvkit");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("snvkit_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) { return snvkit::io::read_file(p); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"no-such-command"}).code == 2);
    CHECK(run({"predict-zeeman", "--bogus"}).code == 2);
    CHECK(run({"predict-zeeman", "--set", "predict.nope=1"}).code == 2);
    CHECK(run({"predict-zeeman", "--seed", "abc"}).code == 2);
    CHECK(run({"fit-spectrum", "x.csv", "--model", "voigt"}).code == 2);
    CHECK(run({"synth", "laser"}).code == 2);
    CHECK(run({"lifetime-linewidth"}).code == 2);
  }

  TEST_CASE("help exits with 0") {
    const auto r = run({"fit-g2", "--help"});
    CHECK(r.code == 0);
    CHECK(r.out.find("--config") != std::string::npos);
    CHECK(r.out.find("--seed") != std::string::npos);
  }

  TEST_CASE("data errors exit with 3") {
    const auto dir = scratch("data");
    CHECK(run({"fit-spectrum", (dir / "missing.csv").string(), "--out", dir.string()}).code == 3);
    snvkit::io::write_file(dir / "bad.csv", "0,1\n1,oops\n");
    const auto r = run({"fit-spectrum", (dir / "bad.csv").string(), "--out", dir.string()});
    CHECK(r.code == 3);
    CHECK(r.err.find("line 2") != std::string::npos);
    snvkit::io::write_file(dir / "flat.csv", "0,1\n1,1\n2,1\n3,1\n4,1\n5,1\n6,1\n7,1\n8,1\n9,1\n");
    CHECK(run({"fit-polarization", (dir / "flat.csv").string(), (dir / "flat.csv").string(), "--out", dir.string()}).code == 3);
  }

  TEST_CASE("non-convergence exits with 4") {
    const auto dir = scratch("conv");
    REQUIRE(run({"synth", "spectrum", "--out", dir.string(), "--noise", "gaussian_absolute", "--noise-magnitude", "0.05", "--seed", "3"}).code == 0);
    const auto spec = (dir / "synth_spectrum.csv").string();
    CHECK(run({"fit-spectrum", spec, "--peaks", "2", "--out", dir.string()}).code == 0);
    CHECK(run({"fit-spectrum", spec, "--peaks", "2", "--max-iterations", "1", "--out", dir.string()}).code == 4);
  }

  TEST_CASE("lifetime linewidth") {
    const auto r = run({"lifetime-linewidth", "--tau1", "3.8"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("41.88", 0) == 0);
  }

  TEST_CASE("predict writes every artifact deterministically") {
    const auto a = scratch("pred_a"), b = scratch("pred_b");
    for (const auto& d : {a, b}) {
      REQUIRE(run({"predict-zeeman", "--b-step", "0.5", "--alpha", "0.98,1.32", "--out", d.string()}).code == 0);
    }
    for (const char* f : {"zeeman_report.json", "zeeman_report.cfg", "zeeman_curves.tsv", "zeeman_lines.csv"}) {
      REQUIRE(fs::exists(a / f));
      if (std::string(f) != "zeeman_report.json" && std::string(f) != "zeeman_report.cfg") {
        CHECK(slurp(a / f) == slurp(b / f));
      }
    }
    const std::string tsv = slurp(a / "zeeman_curves.tsv");
    CHECK(tsv.find("C0_alpha") != std::string::npos);
    // Reports and echoes differ only through output_dir.
    const auto ja = nlohmann::ordered_json::parse(slurp(a / "zeeman_report.json"));
    const auto jb = nlohmann::ordered_json::parse(slurp(b / "zeeman_report.json"));
    CHECK(ja["result"] == jb["result"]);
  }

  TEST_CASE("echoed config reproduces the run byte for byte") {
    const auto a = scratch("echo");
    REQUIRE(run({"synth", "zeeman", "--alpha", "0.98,1.32", "--jitter", "0.5", "--seed", "1234", "--out", a.string()}).code == 0);
    REQUIRE(run({"fit-alpha", (a / "synth_zeeman.csv").string(), "--out", a.string()}).code == 0);
    const std::string report = slurp(a / "fit_alpha_report.json");
    const std::string synth = slurp(a / "synth_zeeman.csv");
    fs::rename(a / "fit_alpha_report.cfg", a / "echo_fit.cfg");
    fs::rename(a / "synth_zeeman_report.cfg", a / "echo_synth.cfg");
    REQUIRE(run({"synth", "zeeman", "--config", (a / "echo_synth.cfg").string()}).code == 0);
    CHECK(slurp(a / "synth_zeeman.csv") == synth);
    REQUIRE(run({"fit-alpha", (a / "synth_zeeman.csv").string(), "--config", (a / "echo_fit.cfg").string()}).code == 0);
    CHECK(slurp(a / "fit_alpha_report.json") == report);
  }

  TEST_CASE("synth outputs are seed-deterministic") {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    for (const char* kind : {"spectrum", "g2", "zeeman", "polarization"}) {
      for (const auto& d : {a, b}) {
        REQUIRE(run({"synth", kind, "--noise", "gaussian_absolute", "--noise-magnitude", "0.02", "--jitter", "0.5",
                     "--seed", "99", "--out", d.string()}).code == 0);
      }
      const std::string file = std::string("synth_") + kind + ".csv";
      CHECK(slurp(a / file) == slurp(b / file));
    }
    const auto c = scratch("seed_c");
    REQUIRE(run({"synth", "g2", "--noise", "gaussian_absolute", "--noise-magnitude", "0.02", "--seed", "100", "--out", c.string()}).code == 0);
    CHECK(slurp(a / "synth_g2.csv") != slurp(c / "synth_g2.csv"));
  }

  TEST_CASE("fit commands on synthesized fixtures") {
    const auto d = scratch("fits");
    REQUIRE(run({"synth", "g2", "--noise", "gaussian_absolute", "--noise-magnitude", "0.02", "--seed", "5", "--out", d.string()}).code == 0);
    const auto g2 = run({"fit-g2", (d / "synth_g2.csv").string(), "--out", d.string()});
    CHECK(g2.code == 0);
    const auto j = nlohmann::ordered_json::parse(slurp(d / "fit_g2_report.json"));
    CHECK(j["result"]["single_emitter"] == true);

    REQUIRE(run({"synth", "polarization", "--polarization", "1,10,0.05", "-o", (d / "c.csv").string(), "--out", d.string()}).code == 0);
    REQUIRE(run({"synth", "polarization", "--polarization", "1,55,0.05", "-o", (d / "dd.csv").string(), "--out", d.string()}).code == 0);
    const auto pol = run({"fit-polarization", (d / "c.csv").string(), (d / "dd.csv").string(), "--out", d.string()});
    CHECK(pol.code == 0);
    CHECK(pol.out.find(": perpendicular") != std::string::npos);

    // Several spectra are fitted in one call.
    REQUIRE(run({"synth", "spectrum", "--noise", "gaussian_absolute", "--noise-magnitude", "0.02", "--seed", "1", "-o", (d / "s1.csv").string(), "--out", d.string()}).code == 0);
    REQUIRE(run({"synth", "spectrum", "--noise", "gaussian_absolute", "--noise-magnitude", "0.02", "--seed", "2", "-o", (d / "s2.csv").string(), "--out", d.string()}).code == 0);
    CHECK(run({"fit-spectrum", (d / "s1.csv").string(), (d / "s2.csv").string(), "--peaks", "2", "--out", d.string()}).code == 0);
    const auto fs_report = nlohmann::ordered_json::parse(slurp(d / "fit_spectrum_report.json"));
    CHECK(fs_report["result"]["fits"].size() == 2);
    CHECK(fs_report["inputs"].size() == 2);
  }
}
