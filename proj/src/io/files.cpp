#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "snvkit/errors.hpp"
#include "snvkit/io.hpp"

namespace snvkit::io {

namespace {
constexpr double kSpeedOfLight = 299792458.0;  // m/s, so c / lambda[nm] is in GHz
}

double wavelength_to_frequency_ghz(double lambda_nm) {
  if (!(lambda_nm > 0.0)) {
    throw NonPositiveWavelength("wavelength must be positive, got " + format_double(lambda_nm));
  }
  return kSpeedOfLight / lambda_nm;
}

double frequency_to_wavelength_nm(double nu_ghz) {
  if (!(nu_ghz > 0.0)) {
    throw NonPositiveWavelength("frequency must be positive, got " + format_double(nu_ghz));
  }
  return kSpeedOfLight / nu_ghz;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scientific(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string format_plot_data(const PlotTable& table) {
  std::string out = "#";
  for (std::size_t j = 0; j < table.headers.size(); ++j) {
    out += j == 0 ? " " : "\t";
    out += table.headers[j];
  }
  out += '\n';
  const std::size_t rows = table.columns.empty() ? 0 : table.columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
      if (j > 0) out += '\t';
      out += format_scientific(table.columns[j][i]);
    }
    out += '\n';
  }
  return out;
}

void emit_plot_data(const PlotTable& table, const std::filesystem::path& path) {
  write_file(path, format_plot_data(table));
}

PlotTable sweep_plot_table(const SweepTable& table, const std::vector<Family>& families,
                           std::string_view suffix) {
  PlotTable plot;
  plot.headers.push_back("B_tesla");
  plot.columns.push_back(table.fields());
  for (Family f : families) {
    for (const auto& curve : tracked_curves(table, f)) {
      plot.headers.push_back(curve.label() + std::string(suffix));
      plot.columns.push_back(curve.offsets_ghz);
      plot.headers.push_back(curve.label() + std::string(suffix) + "_centered");
      plot.columns.push_back(curve.centered_ghz);
    }
  }
  return plot;
}

}  // namespace snvkit::io
