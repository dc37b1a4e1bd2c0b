#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "snvkit/series.hpp"
#include "snvkit/transitions.hpp"

namespace snvkit::io {

/// nu[GHz] = 299792458 / lambda[nm].
double wavelength_to_frequency_ghz(double lambda_nm);
double frequency_to_wavelength_nm(double nu_ghz);

/// Column meaning of a two- or three-column (x, y[, sigma]) CSV trace.
enum class SpectrumFormat { FreqCounts, WavelengthCounts, DelayCounts, AngleIntensity };

SpectrumFormat parse_spectrum_format(std::string_view text);
std::string to_string(SpectrumFormat f);

/// Lines starting with '#' and blank lines are skipped. Wavelength x values
/// are converted to GHz; sigma is a y uncertainty and is kept as is. The x
/// axis must be strictly monotone.
SpectrumSeries parse_spectrum(std::string_view text, SpectrumFormat format);
SpectrumSeries load_spectrum(const std::filesystem::path& path, SpectrumFormat format);
std::string format_spectrum(const SpectrumSeries& s, std::string_view x_label,
                            std::string_view y_label);

/// Sweep CSV: B_tesla,family,line_index,offset_ghz[,sigma_ghz]. line_index -1
/// marks a merged zero-field line. Entries are grouped by field and sorted.
SweepTable parse_sweep(std::string_view text);
SweepTable load_sweep(const std::filesystem::path& path);
/// Writes the merged lines of the selected families (all if empty).
std::string format_sweep(const SweepTable& table, const std::vector<Family>& families = {});

/// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double v);
/// Full precision scientific notation ("%.17e"), used for plot data.
std::string format_scientific(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

/// 64-bit FNV-1a digest as 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

/// Tab-separated columns, one '#' header line.
struct PlotTable {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> columns;
};

std::string format_plot_data(const PlotTable& table);
void emit_plot_data(const PlotTable& table, const std::filesystem::path& path);

/// Plot columns for a model sweep: B_tesla then, per family and tracked line,
/// the offset and centered offset ("C0", "C0_centered", ...). `suffix` is
/// appended to every line column name.
PlotTable sweep_plot_table(const SweepTable& table, const std::vector<Family>& families,
                           std::string_view suffix = "");

}  // namespace snvkit::io
