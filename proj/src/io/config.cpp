#include "snvkit/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "snvkit/errors.hpp"
#include "snvkit/io.hpp"

namespace snvkit {

namespace {

const std::map<std::string, std::string>& option_defaults() {
  static const std::map<std::string, std::string> defaults = {
      {"predict.b_min_t", "0"},
      {"predict.b_max_t", "9"},
      {"predict.b_step_t", "0.5"},
      {"predict.direction", "0,0,1"},
      {"predict.families", "C,D"},
      {"predict.alpha", ""},
      {"fit.model", "lorentzian"},
      {"fit.n_peaks", "1"},
      {"fit.format", "freq_counts"},
      {"fit.max_iterations", "200"},
      {"polarization.tolerance_deg", "1"},
      {"alpha.lines", "all"},
      {"alpha.families", "C,D"},
      {"alpha.direction", "0,0,1"},
      {"synth.noise", "none"},
      {"synth.noise_magnitude", "0"},
      {"synth.field_t", "9"},
      {"synth.family", "C"},
      {"synth.linewidth_ghz", "0.5"},
      {"synth.grid", "-1130,-1020,2201"},
      {"synth.baseline", "0"},
      {"synth.peak_height", "1"},
      {"synth.g2_params", "0.3,0.77,4.8,103"},
      {"synth.g2_grid", "-500,500,2001"},
      {"synth.alpha", "1,1"},
      {"synth.fields", "0.5,9,0.5"},
      {"synth.jitter_ghz", "0"},
      {"synth.drift_ghz", ""},
      {"synth.families", "C,D"},
      {"synth.direction", "0,0,1"},
      {"synth.polarization", "1,10,0.05"},
      {"synth.angles", "0,360,37"},
  };
  return defaults;
}

double to_double(std::string_view key, std::string_view value) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size() || !std::isfinite(v)) {
    throw ConfigError("key '" + std::string(key) + "' needs a number, got '" + std::string(value) + "'");
  }
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  text = trim(text);
  if (text.empty()) return out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_double("list", trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return out;
}

RunConfig::RunConfig() : options(option_defaults()) {}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string k(trim(key));
  value = trim(value);
  if (k == "constants.g_s") constants.g_s = to_double(k, value);
  else if (k == "constants.mu_b_over_h_ghz_per_t") constants.mu_b_over_h = to_double(k, value);
  else if (k == "ground.lambda_so_ghz") ground.lambda_so_ghz = to_double(k, value);
  else if (k == "ground.f") ground.f = to_double(k, value);
  else if (k == "ground.delta_f") ground.delta_f = to_double(k, value);
  else if (k == "excited.lambda_so_ghz") excited.lambda_so_ghz = to_double(k, value);
  else if (k == "excited.f") excited.f = to_double(k, value);
  else if (k == "excited.delta_f") excited.delta_f = to_double(k, value);
  else if (k == "orientation") orientation = parse_orientation(value);
  else if (k == "output_dir") output_dir = std::string(value);
  else if (k == "seed") {
    std::uint64_t s = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
    if (value.empty() || ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ConfigError("seed must be an unsigned 64-bit integer, got '" + std::string(value) + "'");
    }
    seed = s;
  } else {
    const auto it = options.find(k);
    if (it == options.end()) throw ConfigError("unknown configuration key '" + k + "'");
    it->second = std::string(value);
  }
}

void RunConfig::load_text(std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
    }
    set(line.substr(0, eq), line.substr(eq + 1));
  }
}

void RunConfig::validate() const {
  constants.validate();
  ground.validate();
  excited.validate();
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::map<std::string, std::string> all(options.begin(), options.end());
  all["constants.g_s"] = io::format_double(constants.g_s);
  all["constants.mu_b_over_h_ghz_per_t"] = io::format_double(constants.mu_b_over_h);
  all["ground.lambda_so_ghz"] = io::format_double(ground.lambda_so_ghz);
  all["ground.f"] = io::format_double(ground.f);
  all["ground.delta_f"] = io::format_double(ground.delta_f);
  all["excited.lambda_so_ghz"] = io::format_double(excited.lambda_so_ghz);
  all["excited.f"] = io::format_double(excited.f);
  all["excited.delta_f"] = io::format_double(excited.delta_f);
  all["orientation"] = to_string(orientation);
  all["output_dir"] = output_dir;
  all["seed"] = std::to_string(seed);
  return {all.begin(), all.end()};
}

std::string RunConfig::echo() const {
  std::string out;
  for (const auto& [k, v] : entries()) out += k + "=" + v + "\n";
  return out;
}

const std::string& RunConfig::option(std::string_view key) const {
  const auto it = options.find(std::string(key));
  if (it == options.end()) throw ConfigError("unknown option '" + std::string(key) + "'");
  return it->second;
}

double RunConfig::option_double(std::string_view key) const { return to_double(key, option(key)); }

long long RunConfig::option_int(std::string_view key) const {
  const auto& v = option(key);
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || ptr != v.data() + v.size()) {
    throw ConfigError("option '" + std::string(key) + "' needs an integer, got '" + v + "'");
  }
  return out;
}

std::vector<double> RunConfig::option_list(std::string_view key) const {
  try {
    return parse_double_list(option(key));
  } catch (const ConfigError&) {
    throw ConfigError("option '" + std::string(key) + "' needs a comma-separated number list, got '" +
                      option(key) + "'");
  }
}

}  // namespace snvkit
