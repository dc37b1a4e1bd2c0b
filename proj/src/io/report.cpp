#include "snvkit/report.hpp"

#include <cmath>

#include "snvkit/io.hpp"

namespace snvkit::io {

namespace {

using nlohmann::ordered_json;

// JSON has no infinity; unconstrained errors are written as null.
ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

ordered_json line_json(const TransitionLine& l) {
  ordered_json j;
  j["family"] = std::string(1, to_char(l.family));
  j["index"] = l.index;
  j["offset_ghz"] = l.offset_ghz;
  j["intensity"] = l.intensity;
  j["spin_conserving"] = l.spin_conserving;
  j["track"] = {l.track.excited_orbital, l.track.ground_orbital};
  j["multiplicity"] = l.multiplicity;
  if (l.sigma_ghz) j["sigma_ghz"] = *l.sigma_ghz;
  return j;
}

}  // namespace

InputDigest digest_file(const std::filesystem::path& path) {
  return {path.string(), fnv1a64_hex(read_file(path))};
}

ordered_json to_json(const FitResult& fit) {
  ordered_json j;
  ordered_json params = ordered_json::object();
  for (std::size_t i = 0; i < fit.names.size(); ++i) {
    params[fit.names[i]] = {{"value", fit.params[i]}, {"std_error", number(fit.std_errors[i])}};
  }
  j["params"] = params;
  ordered_json derived = ordered_json::object();
  for (const auto& d : fit.derived) {
    derived[d.name] = {{"value", number(d.value)}, {"std_error", number(d.std_error)}};
  }
  j["derived"] = derived;
  j["rss"] = fit.rss;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["n_points"] = fit.n_points;
  j["unconstrained"] = fit.unconstrained;
  j["warnings"] = fit.warnings;
  return j;
}

ordered_json to_json(const SweepTable& table) {
  ordered_json j;
  j["source"] = table.source == SweepSource::Model ? "model" : "measured";
  if (table.meta) {
    const auto& m = *table.meta;
    j["orientation"] = to_string(m.orientation);
    j["direction"] = {m.direction.x, m.direction.y, m.direction.z};
    j["ground"] = {{"lambda_so_ghz", m.ground.lambda_so_ghz}, {"f", m.ground.f},
                   {"delta_f", m.ground.delta_f}};
    j["excited"] = {{"lambda_so_ghz", m.excited.lambda_so_ghz}, {"f", m.excited.f},
                    {"delta_f", m.excited.delta_f}};
    j["constants"] = {{"g_s", m.constants.g_s}, {"mu_b_over_h_ghz_per_t", m.constants.mu_b_over_h}};
  }
  ordered_json entries = ordered_json::array();
  for (const auto& e : table.entries) {
    ordered_json ej;
    ej["field_tesla"] = e.field_tesla;
    ordered_json lines = ordered_json::array();
    for (const auto& l : e.lines) lines.push_back(line_json(l));
    ej["lines"] = lines;
    ordered_json incomplete = ordered_json::array();
    for (Family f : e.incomplete) incomplete.push_back(std::string(1, to_char(f)));
    ej["incomplete"] = incomplete;
    entries.push_back(ej);
  }
  j["entries"] = entries;
  return j;
}

ordered_json to_json(const AlphaFit& fit) {
  ordered_json j;
  j["alpha_g"] = {{"value", fit.alpha_g}, {"std_error", number(fit.alpha_g_err)}};
  j["alpha_u"] = {{"value", fit.alpha_u}, {"std_error", number(fit.alpha_u_err)}};
  j["rss_scaled_ghz2"] = fit.rss_scaled;
  j["rss_unscaled_ghz2"] = fit.rss_unscaled;
  j["rss_ratio"] = fit.rss_scaled > 0.0 ? ordered_json(fit.rss_unscaled / fit.rss_scaled)
                                        : ordered_json(nullptr);
  j["residual_count"] = fit.residual_count;
  j["fields_used"] = fit.fields_used;
  j["converged"] = fit.fit.converged;
  j["iterations"] = fit.fit.iterations;
  j["unconstrained"] = fit.fit.unconstrained;
  return j;
}

std::string format_report(const Report& report) {
  ordered_json j;
  j["tool"] = "snvkit";
  j["version"] = kToolkitVersion;
  j["command"] = report.command;
  ordered_json inputs = ordered_json::array();
  for (const auto& in : report.inputs) inputs.push_back({{"path", in.path}, {"fnv1a64", in.fnv1a64}});
  j["inputs"] = inputs;
  ordered_json config = ordered_json::object();
  for (const auto& [k, v] : report.config) config[k] = v;
  j["config"] = config;
  j["result"] = report.payload;
  return j.dump(2) + "\n";
}

void emit_report(const Report& report, const std::filesystem::path& path) {
  write_file(path, format_report(report));
}

}  // namespace snvkit::io
