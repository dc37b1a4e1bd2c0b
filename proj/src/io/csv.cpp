#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>

#include "snvkit/errors.hpp"
#include "snvkit/io.hpp"

namespace snvkit::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

struct Row {
  std::size_t line_no;
  std::vector<std::string_view> cells;
};

std::vector<Row> split_rows(std::string_view text) {
  std::vector<Row> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    Row row{line_no, {}};
    while (true) {
      const auto comma = line.find(',');
      row.cells.push_back(trim(line.substr(0, comma)));
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

double parse_number(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(where(line_no) + "not a number: '" + std::string(cell) + "'");
  }
  if (!std::isfinite(v)) throw ParseError(where(line_no) + "non-finite value");
  return v;
}

int parse_int(std::string_view cell, std::size_t line_no) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || ptr != cell.data() + cell.size() || cell.empty()) {
    throw ParseError(where(line_no) + "not an integer: '" + std::string(cell) + "'");
  }
  return v;
}

}  // namespace

SpectrumFormat parse_spectrum_format(std::string_view text) {
  if (text == "freq_counts") return SpectrumFormat::FreqCounts;
  if (text == "wavelength_counts") return SpectrumFormat::WavelengthCounts;
  if (text == "delay_counts") return SpectrumFormat::DelayCounts;
  if (text == "angle_intensity") return SpectrumFormat::AngleIntensity;
  throw ConfigError("unknown spectrum format '" + std::string(text) + "'");
}

std::string to_string(SpectrumFormat f) {
  switch (f) {
    case SpectrumFormat::FreqCounts: return "freq_counts";
    case SpectrumFormat::WavelengthCounts: return "wavelength_counts";
    case SpectrumFormat::DelayCounts: return "delay_counts";
    case SpectrumFormat::AngleIntensity: return "angle_intensity";
  }
  return "?";
}

SpectrumSeries parse_spectrum(std::string_view text, SpectrumFormat format) {
  const auto rows = split_rows(text);
  if (rows.empty()) throw EmptySeries("no data rows");
  const std::size_t ncols = rows.front().cells.size();
  if (ncols != 2 && ncols != 3) {
    throw ParseError(where(rows.front().line_no) + "expected 2 or 3 columns, got " +
                     std::to_string(ncols));
  }
  SpectrumSeries s;
  std::vector<double> sigma;
  for (const auto& row : rows) {
    if (row.cells.size() != ncols) {
      throw ParseError(where(row.line_no) + "expected " + std::to_string(ncols) + " columns, got " +
                       std::to_string(row.cells.size()));
    }
    double x = parse_number(row.cells[0], row.line_no);
    const double y = parse_number(row.cells[1], row.line_no);
    double sg = ncols == 3 ? parse_number(row.cells[2], row.line_no) : 0.0;
    if (ncols == 3 && !(sg > 0.0)) throw ParseError(where(row.line_no) + "sigma must be positive");
    if (format == SpectrumFormat::WavelengthCounts) {
      if (!(x > 0.0)) throw NonPositiveWavelength(where(row.line_no) + "wavelength must be positive");
      x = wavelength_to_frequency_ghz(x);
    }
    s.x.push_back(x);
    s.y.push_back(y);
    if (ncols == 3) sigma.push_back(sg);
  }
  if (ncols == 3) s.sigma = std::move(sigma);
  s.validate(1, true);
  return s;
}

SpectrumSeries load_spectrum(const std::filesystem::path& path, SpectrumFormat format) {
  return parse_spectrum(read_file(path), format);
}

std::string format_spectrum(const SpectrumSeries& s, std::string_view x_label,
                            std::string_view y_label) {
  std::string out = "# " + std::string(x_label) + "," + std::string(y_label);
  if (s.sigma) out += ",sigma";
  out += '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += format_double(s.x[i]) + "," + format_double(s.y[i]);
    if (s.sigma) out += "," + format_double((*s.sigma)[i]);
    out += '\n';
  }
  return out;
}

SweepTable parse_sweep(std::string_view text) {
  const auto rows = split_rows(text);
  if (rows.empty()) throw EmptySeries("sweep file has no data rows");
  std::map<double, std::vector<TransitionLine>> grouped;
  for (const auto& row : rows) {
    if (row.cells.size() != 4 && row.cells.size() != 5) {
      throw ParseError(where(row.line_no) + "expected 4 or 5 columns, got " +
                       std::to_string(row.cells.size()));
    }
    TransitionLine line;
    const double field = parse_number(row.cells[0], row.line_no);
    try {
      line.family = parse_family(row.cells[1]);
    } catch (const Error&) {
      throw ParseError(where(row.line_no) + "unknown family '" + std::string(row.cells[1]) + "'");
    }
    line.index = parse_int(row.cells[2], row.line_no);
    if (line.index < -1 || line.index > 3) {
      throw ParseError(where(row.line_no) + "line index must be in -1..3");
    }
    line.offset_ghz = parse_number(row.cells[3], row.line_no);
    if (row.cells.size() == 5) line.sigma_ghz = parse_number(row.cells[4], row.line_no);

    auto& lines = grouped[field];
    for (const auto& other : lines) {
      if (other.family != line.family) continue;
      if (other.index == line.index) {
        throw DuplicateLine(where(row.line_no) + "duplicate line " + to_char(line.family) +
                            std::to_string(line.index) + " at " + format_double(field) + " T");
      }
      if (other.index == -1 || line.index == -1) {
        throw ParseError(where(row.line_no) + "merged line (index -1) must be alone in its family");
      }
    }
    lines.push_back(line);
  }

  SweepTable table;
  table.source = SweepSource::Measured;
  for (auto& [field, lines] : grouped) {
    std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
      return a.family != b.family ? a.family < b.family : a.index < b.index;
    });
    SweepEntry entry;
    entry.field_tesla = field;
    entry.lines = std::move(lines);
    if (field != 0.0) {
      for (Family f : kAllFamilies) {
        const auto n = std::count_if(entry.lines.begin(), entry.lines.end(),
                                     [f](const auto& l) { return l.family == f; });
        if (n > 0 && n < 4) entry.incomplete.push_back(f);
      }
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

SweepTable load_sweep(const std::filesystem::path& path) { return parse_sweep(read_file(path)); }

std::string format_sweep(const SweepTable& table, const std::vector<Family>& families) {
  auto selected = [&](Family f) {
    return families.empty() || std::find(families.begin(), families.end(), f) != families.end();
  };
  bool with_sigma = true;
  bool any = false;
  for (const auto& e : table.entries) {
    for (const auto& l : e.lines) {
      if (!selected(l.family)) continue;
      any = true;
      with_sigma = with_sigma && l.sigma_ghz.has_value();
    }
  }
  with_sigma = with_sigma && any;
  std::string out = with_sigma ? "# B_tesla,family,line_index,offset_ghz,sigma_ghz\n"
                               : "# B_tesla,family,line_index,offset_ghz\n";
  for (const auto& e : table.entries) {
    auto lines = e.lines;
    std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
      return a.family != b.family ? a.family < b.family : a.index < b.index;
    });
    for (const auto& l : lines) {
      if (!selected(l.family)) continue;
      out += format_double(e.field_tesla) + "," + to_char(l.family) + "," + std::to_string(l.index) +
             "," + format_double(l.offset_ghz);
      if (with_sigma) out += "," + format_double(*l.sigma_ghz);
      out += '\n';
    }
  }
  return out;
}

}  // namespace snvkit::io
