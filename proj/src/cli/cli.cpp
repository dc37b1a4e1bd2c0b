#include "snvkit/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <future>

#include "snvkit/alpha.hpp"
#include "snvkit/config.hpp"
#include "snvkit/errors.hpp"
#include "snvkit/fits.hpp"
#include "snvkit/io.hpp"
#include "snvkit/report.hpp"
#include "snvkit/synth.hpp"

namespace snvkit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

// A command-line flag that overrides one configuration key when given.
struct FlagBinding {
  std::string key;
  std::string value;
  CLI::Option* option = nullptr;
};

class Bindings {
 public:
  void add(CLI::App* app, const std::string& flag, const std::string& key, const std::string& help) {
    auto& b = items_.emplace_back(std::make_unique<FlagBinding>());
    b->key = key;
    b->option = app->add_option(flag, b->value, help + " [" + key + "]");
  }

  void apply(RunConfig& cfg) const {
    for (const auto& b : items_) {
      if (b->option->count() > 0) cfg.set(b->key, b->value);
    }
  }

 private:
  std::vector<std::unique_ptr<FlagBinding>> items_;
};

std::vector<Family> families_from(const std::string& text) {
  std::vector<Family> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    out.push_back(parse_family(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (out.empty()) throw ConfigError("family list is empty");
  return out;
}

LabVector vector_from(const RunConfig& cfg, const std::string& key) {
  const auto v = cfg.option_list(key);
  if (v.size() != 3) throw ConfigError("option '" + key + "' needs three components x,y,z");
  return {v[0], v[1], v[2]};
}

std::vector<double> field_steps(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw ConfigError("field range needs step > 0 and max >= min");
  const auto n = static_cast<std::size_t>(std::llround((last - first) / step)) + 1;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = first + step * static_cast<double>(i);
  return out;
}

std::vector<double> grid_from(const RunConfig& cfg, const std::string& key) {
  const auto g = cfg.option_list(key);
  if (g.size() != 3 || !(g[2] >= 2.0) || g[2] != std::floor(g[2])) {
    throw ConfigError("option '" + key + "' needs first,last,count with count >= 2");
  }
  return linear_grid(g[0], g[1], static_cast<std::size_t>(g[2]));
}

void finish(const io::Report& report, const RunConfig& cfg, const std::string& stem,
            std::ostream& out) {
  const fs::path dir(cfg.output_dir);
  io::emit_report(report, dir / (stem + ".json"));
  io::write_file(dir / (stem + ".cfg"), cfg.echo());
  out << "wrote " << (dir / (stem + ".json")).string() << "\n";
}

FitOptions solver_options(const RunConfig& cfg) {
  FitOptions o;
  const auto n = cfg.option_int("fit.max_iterations");
  if (n < 1) throw ConfigError("fit.max_iterations must be >= 1");
  o.max_iterations = static_cast<int>(n);
  return o;
}

int predict_zeeman(const RunConfig& cfg, std::ostream& out) {
  const auto fields = field_steps(cfg.option_double("predict.b_min_t"),
                                  cfg.option_double("predict.b_max_t"),
                                  cfg.option_double("predict.b_step_t"));
  const auto direction = vector_from(cfg, "predict.direction");
  const auto families = families_from(cfg.option("predict.families"));
  const auto table =
      zeeman_sweep(cfg.ground, cfg.excited, cfg.constants, fields, direction, cfg.orientation);
  auto plot = io::sweep_plot_table(table, families);

  io::Report report;
  report.command = "predict-zeeman";
  report.config = cfg.entries();
  report.payload["sweep"] = io::to_json(table);

  const auto alpha = cfg.option_list("predict.alpha");
  if (!alpha.empty()) {
    if (alpha.size() != 2) throw ConfigError("predict.alpha needs alpha_g,alpha_u");
    const auto scaled = zeeman_sweep(cfg.ground.with_orbital_scale(alpha[0]),
                                     cfg.excited.with_orbital_scale(alpha[1]), cfg.constants,
                                     fields, direction, cfg.orientation);
    const auto extra = io::sweep_plot_table(scaled, families, "_alpha");
    for (std::size_t j = 1; j < extra.headers.size(); ++j) {
      plot.headers.push_back(extra.headers[j]);
      plot.columns.push_back(extra.columns[j]);
    }
    report.payload["alpha"] = {alpha[0], alpha[1]};
    report.payload["sweep_alpha"] = io::to_json(scaled);
  }

  const fs::path dir(cfg.output_dir);
  io::emit_plot_data(plot, dir / "zeeman_curves.tsv");
  io::write_file(dir / "zeeman_lines.csv", io::format_sweep(table, families));
  finish(report, cfg, "zeeman_report", out);
  return kSuccess;
}

int fit_spectrum(const RunConfig& cfg, const std::vector<std::string>& inputs, std::ostream& out,
                 std::ostream& err) {
  const auto shape = parse_peak_shape(cfg.option("fit.model"));
  const auto n_peaks = static_cast<int>(cfg.option_int("fit.n_peaks"));
  if (n_peaks != 1 && n_peaks != 2) throw ConfigError("fit.n_peaks must be 1 or 2");
  const auto format = io::parse_spectrum_format(cfg.option("fit.format"));

  std::vector<SpectrumSeries> series;
  io::Report report;
  report.command = "fit-spectrum";
  report.config = cfg.entries();
  for (const auto& path : inputs) {
    series.push_back(io::load_spectrum(path, format));
    report.inputs.push_back(io::digest_file(path));
  }
  const auto solver = solver_options(cfg);
  std::vector<std::future<FitResult>> jobs;
  for (const auto& s : series) {
    jobs.push_back(std::async(std::launch::async, [&s, shape, n_peaks, solver] {
      return fit_peaks(s, shape, n_peaks, solver);
    }));
  }
  bool all_converged = true;
  ordered_json fits = ordered_json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const FitResult r = jobs[i].get();
    all_converged = all_converged && r.converged;
    for (const auto& w : r.warnings) err << inputs[i] << ": warning: " << w << "\n";
    fits.push_back({{"input", inputs[i]}, {"fit", io::to_json(r)}});
  }
  report.payload["model"] = to_string(shape);
  report.payload["n_peaks"] = n_peaks;
  report.payload["fits"] = fits;
  finish(report, cfg, "fit_spectrum_report", out);
  return all_converged ? kSuccess : kNotConverged;
}

int fit_g2_command(const RunConfig& cfg, const std::string& input, std::ostream& out,
                   std::ostream& err) {
  const auto data = io::load_spectrum(input, io::SpectrumFormat::DelayCounts);
  const FitResult r = fit_g2(data, solver_options(cfg));
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  io::Report report;
  report.command = "fit-g2";
  report.config = cfg.entries();
  report.inputs.push_back(io::digest_file(input));
  report.payload["fit"] = io::to_json(r);
  const auto& g0 = r.derived_value("g2_zero");
  report.payload["g2_zero"] = g0.value;
  report.payload["single_emitter"] = g0.value < 0.5;
  finish(report, cfg, "fit_g2_report", out);
  out << "g2[0] = " << io::format_double(g0.value) << " +/- " << io::format_double(g0.std_error)
      << "\n";
  return r.converged ? kSuccess : kNotConverged;
}

int fit_polarization_command(const RunConfig& cfg, const std::vector<std::string>& inputs,
                             std::ostream& out) {
  if (inputs.size() != 2) throw ConfigError("fit-polarization takes exactly two scans");
  io::Report report;
  report.command = "fit-polarization";
  report.config = cfg.entries();
  const auto solver = solver_options(cfg);
  std::vector<FitResult> fits;
  ordered_json series = ordered_json::array();
  for (const auto& path : inputs) {
    fits.push_back(fit_polarization(io::load_spectrum(path, io::SpectrumFormat::AngleIntensity), solver));
    report.inputs.push_back(io::digest_file(path));
    series.push_back({{"input", path}, {"fit", io::to_json(fits.back())}});
  }
  const auto verdict =
      check_orthogonality(fits[0], fits[1], cfg.option_double("polarization.tolerance_deg"));
  report.payload["series"] = series;
  report.payload["orthogonality"] = {{"hwp_separation_deg", verdict.hwp_separation_deg},
                                     {"dipole_angle_deg", verdict.dipole_angle_deg},
                                     {"perpendicular", verdict.perpendicular}};
  finish(report, cfg, "fit_polarization_report", out);
  out << "dipole angle " << io::format_double(verdict.dipole_angle_deg) << " deg: "
      << (verdict.perpendicular ? "perpendicular" : "not perpendicular") << "\n";
  return fits[0].converged && fits[1].converged ? kSuccess : kNotConverged;
}

int fit_alpha_command(const RunConfig& cfg, const std::string& input, std::ostream& out) {
  const auto measured = io::load_sweep(input);
  AlphaFitOptions options;
  options.lines = parse_line_selection(cfg.option("alpha.lines"));
  options.families = families_from(cfg.option("alpha.families"));
  options.direction = vector_from(cfg, "alpha.direction");
  options.solver = solver_options(cfg);
  const auto fit =
      fit_alpha(measured, cfg.ground, cfg.excited, cfg.constants, cfg.orientation, options);
  io::Report report;
  report.command = "fit-alpha";
  report.config = cfg.entries();
  report.inputs.push_back(io::digest_file(input));
  report.payload = io::to_json(fit);
  finish(report, cfg, "fit_alpha_report", out);
  out << "alpha_g = " << io::format_double(fit.alpha_g) << ", alpha_u = "
      << io::format_double(fit.alpha_u) << "\n";
  return kSuccess;
}

int synth_command(const RunConfig& cfg, const std::string& kind, std::string output,
                  std::ostream& out) {
  const NoiseSpec noise{parse_noise_kind(cfg.option("synth.noise")),
                        cfg.option_double("synth.noise_magnitude"), cfg.seed};
  if (output.empty()) output = (fs::path(cfg.output_dir) / ("synth_" + kind + ".csv")).string();

  std::string contents;
  if (kind == "spectrum") {
    const auto dir = vector_from(cfg, "synth.direction");
    const double b = cfg.option_double("synth.field_t");
    const double dn = dir.norm();
    const auto frame = field_in_defect_frame({dir.x * b / dn, dir.y * b / dn, dir.z * b / dn},
                                             cfg.orientation);
    const auto table = transition_table(solve_manifold(cfg.ground, cfg.constants, frame),
                                        solve_manifold(cfg.excited, cfg.constants, frame));
    std::vector<TransitionLine> lines;
    for (Family f : families_from(cfg.option("synth.families"))) {
      const auto fam = family_lines(table, f);
      lines.insert(lines.end(), fam.begin(), fam.end());
    }
    const auto grid = grid_from(cfg, "synth.grid");
    const auto s = synth_spectrum(lines, cfg.option_double("synth.linewidth_ghz"), grid, noise,
                                  cfg.option_double("synth.baseline"),
                                  cfg.option_double("synth.peak_height"));
    contents = io::format_spectrum(s, "GHz", "counts");
  } else if (kind == "g2") {
    const auto p = cfg.option_list("synth.g2_params");
    if (p.size() != 4) throw ConfigError("synth.g2_params needs b,c,tau1,tau2");
    const auto s = synth_g2({p[0], p[1], p[2], p[3]}, grid_from(cfg, "synth.g2_grid"), noise);
    contents = io::format_spectrum(s, "ns", "g2");
  } else if (kind == "polarization") {
    const auto p = cfg.option_list("synth.polarization");
    if (p.size() != 3) throw ConfigError("synth.polarization needs amplitude,theta0_deg,offset");
    const auto s = synth_polarization(p[0], p[1], p[2], grid_from(cfg, "synth.angles"), noise);
    contents = io::format_spectrum(s, "deg", "intensity");
  } else if (kind == "zeeman") {
    const auto alpha = cfg.option_list("synth.alpha");
    if (alpha.size() != 2) throw ConfigError("synth.alpha needs alpha_g,alpha_u");
    const auto f = cfg.option_list("synth.fields");
    if (f.size() != 3) throw ConfigError("synth.fields needs min,max,step");
    const auto fields = field_steps(f[0], f[1], f[2]);
    const auto drift = cfg.option_list("synth.drift_ghz");
    const auto table = synth_zeeman_dataset(
        alpha[0], alpha[1], cfg.ground, cfg.excited, cfg.constants, cfg.orientation,
        vector_from(cfg, "synth.direction"), fields, cfg.option_double("synth.jitter_ghz"), drift,
        cfg.seed);
    contents = io::format_sweep(table, families_from(cfg.option("synth.families")));
  } else {
    throw ConfigError("unknown synth kind '" + kind + "' (spectrum, g2, zeeman, polarization)");
  }
  io::write_file(output, contents);

  io::Report report;
  report.command = "synth " + kind;
  report.config = cfg.entries();
  report.payload["output"] = output;
  report.payload["fnv1a64"] = io::fnv1a64_hex(contents);
  finish(report, cfg, "synth_" + kind + "_report", out);
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"snvkit: Zeeman spectra and fitting tools for group-IV color centers in diamond"};
  app.require_subcommand(1);

  std::string config_path;
  std::string seed;
  std::string out_dir;
  std::string orientation;
  std::vector<std::string> overrides;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key=value configuration file");
    sub->add_option("--seed", seed, "64-bit seed for synthetic data [seed]");
    sub->add_option("--out", out_dir, "output directory [output_dir]");
    sub->add_option("--orientation", orientation, "defect axis: 111, -111, 1-11, 11-1 [orientation]");
    sub->add_option("--set", overrides, "extra key=value configuration override (repeatable)");
  };

  Bindings bindings;

  auto* predict = app.add_subcommand("predict-zeeman", "Zeeman-split line positions over a field sweep");
  add_common(predict);
  bindings.add(predict, "--b-min", "predict.b_min_t", "first field magnitude in T");
  bindings.add(predict, "--b-max", "predict.b_max_t", "last field magnitude in T");
  bindings.add(predict, "--b-step", "predict.b_step_t", "field step in T");
  bindings.add(predict, "--direction", "predict.direction", "field direction x,y,z in the crystal frame");
  bindings.add(predict, "--families", "predict.families", "families to tabulate, e.g. C,D");
  bindings.add(predict, "--alpha", "predict.alpha", "also emit curves with f, delta_f scaled by alpha_g,alpha_u");

  std::vector<std::string> spectrum_inputs;
  auto* fit_spec = app.add_subcommand("fit-spectrum", "Lorentzian or Gaussian peak fit");
  add_common(fit_spec);
  fit_spec->add_option("inputs", spectrum_inputs, "spectrum CSV files")->required();
  bindings.add(fit_spec, "--model", "fit.model", "lorentzian or gaussian");
  bindings.add(fit_spec, "--peaks", "fit.n_peaks", "number of peaks, 1 or 2");
  bindings.add(fit_spec, "--format", "fit.format", "freq_counts or wavelength_counts");
  bindings.add(fit_spec, "--max-iterations", "fit.max_iterations", "iteration cap of the least-squares solver");

  std::string g2_input;
  auto* fit_g2_cmd = app.add_subcommand("fit-g2", "second-order autocorrelation fit");
  add_common(fit_g2_cmd);
  fit_g2_cmd->add_option("input", g2_input, "delay histogram CSV (ns, g2)")->required();

  std::vector<std::string> pol_inputs;
  auto* fit_pol = app.add_subcommand("fit-polarization", "polarization fits and orthogonality check");
  add_common(fit_pol);
  fit_pol->add_option("inputs", pol_inputs, "two angle CSV files (deg, intensity)")->required()->expected(2);
  bindings.add(fit_pol, "--tolerance", "polarization.tolerance_deg", "orthogonality tolerance in HWP degrees");

  std::string alpha_input;
  auto* fit_alpha_cmd = app.add_subcommand("fit-alpha", "fit orbital g-factor scales to a measured sweep");
  add_common(fit_alpha_cmd);
  fit_alpha_cmd->add_option("input", alpha_input, "sweep CSV (B_tesla,family,line_index,offset_ghz[,sigma_ghz])")->required();
  bindings.add(fit_alpha_cmd, "--lines", "alpha.lines", "all, inner or outer");
  bindings.add(fit_alpha_cmd, "--families", "alpha.families", "families to fit, e.g. C,D");
  bindings.add(fit_alpha_cmd, "--direction", "alpha.direction", "field direction x,y,z");

  std::string synth_kind;
  std::string synth_output;
  auto* synth = app.add_subcommand("synth", "generate synthetic fixtures");
  add_common(synth);
  synth->add_option("kind", synth_kind, "spectrum, g2, zeeman or polarization")->required();
  synth->add_option("-o,--output", synth_output, "output CSV path");
  bindings.add(synth, "--noise", "synth.noise", "none, gaussian_relative, gaussian_absolute, poisson_counts");
  bindings.add(synth, "--noise-magnitude", "synth.noise_magnitude", "noise magnitude");
  bindings.add(synth, "--field", "synth.field_t", "field magnitude in T (spectrum)");
  bindings.add(synth, "--family", "synth.family", "family or families to draw, e.g. C (spectrum)");
  bindings.add(synth, "--linewidth", "synth.linewidth_ghz", "Lorentzian FWHM in GHz (spectrum)");
  bindings.add(synth, "--grid", "synth.grid", "first,last,count in GHz (spectrum)");
  bindings.add(synth, "--baseline", "synth.baseline", "constant background (spectrum)");
  bindings.add(synth, "--peak-height", "synth.peak_height", "height of a unit-intensity line (spectrum)");
  bindings.add(synth, "--g2-params", "synth.g2_params", "b,c,tau1,tau2 (g2)");
  bindings.add(synth, "--g2-grid", "synth.g2_grid", "first,last,count in ns (g2)");
  bindings.add(synth, "--alpha", "synth.alpha", "alpha_g,alpha_u (zeeman)");
  bindings.add(synth, "--fields", "synth.fields", "min,max,step in T (zeeman)");
  bindings.add(synth, "--jitter", "synth.jitter_ghz", "per-line Gaussian jitter in GHz (zeeman)");
  bindings.add(synth, "--drift", "synth.drift_ghz", "per-field common drift list in GHz (zeeman)");
  bindings.add(synth, "--families", "synth.families", "families, e.g. C,D (zeeman)");
  bindings.add(synth, "--direction", "synth.direction", "field direction x,y,z");
  bindings.add(synth, "--polarization", "synth.polarization", "amplitude,theta0_deg,offset (polarization)");
  bindings.add(synth, "--angles", "synth.angles", "first,last,count in degrees (polarization)");

  double tau1 = 0.0;
  auto* linewidth = app.add_subcommand("lifetime-linewidth", "lifetime-limited linewidth 1/(2 pi tau1)");
  add_common(linewidth);
  linewidth->add_option("--tau1", tau1, "excited-state lifetime in ns")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg.load_text(io::read_file(config_path));
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!seed.empty()) cfg.set("seed", seed);
    if (!out_dir.empty()) cfg.set("output_dir", out_dir);
    if (!orientation.empty()) cfg.set("orientation", orientation);
    bindings.apply(cfg);
    cfg.validate();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return e.kind() == ErrorKind::Usage ? kUsageError : kDataError;
  }

  try {
    if (predict->parsed()) return predict_zeeman(cfg, out);
    if (fit_spec->parsed()) return fit_spectrum(cfg, spectrum_inputs, out, err);
    if (fit_g2_cmd->parsed()) return fit_g2_command(cfg, g2_input, out, err);
    if (fit_pol->parsed()) return fit_polarization_command(cfg, pol_inputs, out);
    if (fit_alpha_cmd->parsed()) return fit_alpha_command(cfg, alpha_input, out);
    if (synth->parsed()) return synth_command(cfg, synth_kind, synth_output, out);
    if (linewidth->parsed()) {
      out << io::format_double(lifetime_limited_linewidth_mhz(tau1)) << " MHz\n";
      return kSuccess;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::Usage: return kUsageError;
      case ErrorKind::Data: return kDataError;
      case ErrorKind::Convergence: return kNotConverged;
    }
  }
  return kUsageError;
}

}  // namespace snvkit::cli
