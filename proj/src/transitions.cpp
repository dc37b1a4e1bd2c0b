#include "snvkit/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "snvkit/errors.hpp"

namespace snvkit {

char to_char(Family f) {
  switch (f) {
    case Family::A: return 'A';
    case Family::B: return 'B';
    case Family::C: return 'C';
    case Family::D: return 'D';
  }
  return '?';
}

Family parse_family(std::string_view text) {
  if (text == "A") return Family::A;
  if (text == "B") return Family::B;
  if (text == "C") return Family::C;
  if (text == "D") return Family::D;
  throw InvalidArgument("unknown transition family '" + std::string(text) + "'");
}

namespace {

double spin_overlap_sq(const EigenState& u, const EigenState& g) {
  const Complex amp = std::conj(u.spin[0]) * g.spin[0] + std::conj(u.spin[1]) * g.spin[1];
  return std::norm(amp);
}

Family family_of(Branch excited, Branch ground) {
  if (excited == Branch::Upper) return ground == Branch::Lower ? Family::A : Family::B;
  return ground == Branch::Lower ? Family::C : Family::D;
}

void sort_descending(std::vector<TransitionLine>& lines) {
  std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
    return a.offset_ghz > b.offset_ghz;
  });
}

}  // namespace

std::vector<TransitionLine> family_lines(std::span<const TransitionLine> lines, Family family) {
  std::vector<TransitionLine> out;
  for (const auto& l : lines) {
    if (l.family == family) out.push_back(l);
  }
  sort_descending(out);
  return out;
}

std::vector<TransitionLine> raw_transitions(const EigenSystem& ground, const EigenSystem& excited) {
  std::vector<TransitionLine> all;
  all.reserve(16);
  for (const auto& u : excited.states) {
    for (const auto& g : ground.states) {
      TransitionLine line;
      line.family = family_of(u.branch, g.branch);
      line.offset_ghz = u.energy - g.energy;
      line.intensity = std::clamp(spin_overlap_sq(u, g), 0.0, 1.0);
      line.spin_conserving = line.intensity > 0.5;
      line.track = {u.orbital, g.orbital};
      all.push_back(line);
    }
  }
  std::vector<TransitionLine> out;
  for (Family f : kAllFamilies) {
    auto fam = family_lines(all, f);
    for (std::size_t i = 0; i < fam.size(); ++i) fam[i].index = static_cast<int>(i);
    out.insert(out.end(), fam.begin(), fam.end());
  }
  return out;
}

std::vector<TransitionLine> transition_table(const EigenSystem& ground, const EigenSystem& excited,
                                             double merge_tol_ghz) {
  const auto raw = raw_transitions(ground, excited);
  std::vector<TransitionLine> out;
  for (Family f : kAllFamilies) {
    const auto fam = family_lines(raw, f);
    std::vector<std::vector<TransitionLine>> groups;
    for (const auto& line : fam) {
      if (!groups.empty() &&
          groups.back().back().offset_ghz - line.offset_ghz <= merge_tol_ghz) {
        groups.back().push_back(line);
      } else {
        groups.push_back({line});
      }
    }
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const auto& group = groups[gi];
      TransitionLine merged = group.front();
      double offset_sum = 0.0;
      double intensity_sum = 0.0;
      std::vector<int> excited_states;
      for (const auto& l : group) {
        offset_sum += l.offset_ghz;
        intensity_sum += l.intensity;
        if (std::find(excited_states.begin(), excited_states.end(), l.track.excited_orbital) ==
            excited_states.end()) {
          excited_states.push_back(l.track.excited_orbital);
        }
      }
      merged.offset_ghz = offset_sum / static_cast<double>(group.size());
      merged.intensity =
          std::min(1.0, intensity_sum / static_cast<double>(excited_states.size()));
      merged.spin_conserving = merged.intensity > 0.5;
      merged.multiplicity = static_cast<int>(group.size());
      merged.index = groups.size() == 1 ? -1 : static_cast<int>(gi);
      out.push_back(merged);
    }
  }
  return out;
}

std::array<double, 4> pairwise_center(const std::array<double, 4>& v) {
  const double outer = 0.5 * (v[0] + v[3]);
  const double inner = 0.5 * (v[1] + v[2]);
  return {v[0] - outer, v[1] - inner, v[2] - inner, v[3] - outer};
}

std::array<double, 4> pairwise_center(std::span<const double> offsets) {
  if (offsets.size() != 4) {
    throw CountMismatch("pairwise centering needs exactly 4 offsets, got " +
                        std::to_string(offsets.size()));
  }
  for (double v : offsets) {
    if (!std::isfinite(v)) throw InvalidArgument("pairwise centering got a non-finite offset");
  }
  return pairwise_center(std::array<double, 4>{offsets[0], offsets[1], offsets[2], offsets[3]});
}

std::vector<double> SweepTable::fields() const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(e.field_tesla);
  return out;
}

SweepTable zeeman_sweep(const ManifoldParameters& ground, const ManifoldParameters& excited,
                        const PhysicalConstants& constants, std::span<const double> fields_tesla,
                        const LabVector& direction, DefectOrientation orientation) {
  ground.validate();
  excited.validate();
  constants.validate();
  if (fields_tesla.empty()) throw InvalidArgument("field list is empty");
  for (std::size_t i = 1; i < fields_tesla.size(); ++i) {
    if (!(fields_tesla[i] > fields_tesla[i - 1])) {
      throw InvalidArgument("field list must be strictly increasing");
    }
  }
  const double dnorm = direction.norm();
  if (!(dnorm > 0.0) || !std::isfinite(dnorm)) {
    throw InvalidArgument("field direction must be a nonzero finite vector");
  }
  const LabVector unit{direction.x / dnorm, direction.y / dnorm, direction.z / dnorm};

  SweepTable table;
  table.source = SweepSource::Model;
  table.meta = SweepMetadata{orientation, unit, ground, excited, constants};
  table.entries.reserve(fields_tesla.size());
  for (double b : fields_tesla) {
    const LabVector b_lab{unit.x * b, unit.y * b, unit.z * b};
    const auto frame = field_in_defect_frame(b_lab, orientation);
    const auto es_g = solve_manifold(ground, constants, frame);
    const auto es_u = solve_manifold(excited, constants, frame);
    SweepEntry entry;
    entry.field_tesla = b;
    entry.raw = raw_transitions(es_g, es_u);
    entry.lines = transition_table(es_g, es_u);
    if (b != 0.0) {
      for (Family f : kAllFamilies) {
        if (family_lines(entry.lines, f).size() < 4) entry.incomplete.push_back(f);
      }
    }
    table.entries.push_back(std::move(entry));
  }
  return table;
}

std::string TrackedCurve::label() const {
  return std::string(1, to_char(family)) + std::to_string(label_index);
}

std::vector<TrackedCurve> tracked_curves(const SweepTable& table, Family family) {
  if (table.entries.empty() || table.entries.back().raw.empty()) {
    throw InvalidArgument("tracked curves need a model sweep with raw lines");
  }
  const auto last = family_lines(table.entries.back().raw, family);
  std::vector<TrackedCurve> curves;
  for (std::size_t i = 0; i < last.size(); ++i) {
    TrackedCurve c;
    c.family = family;
    c.label_index = static_cast<int>(i);
    c.track = last[i].track;
    curves.push_back(c);
  }
  for (const auto& entry : table.entries) {
    const auto fam = family_lines(entry.raw, family);
    std::array<double, 4> ranked{};
    for (std::size_t i = 0; i < 4 && i < fam.size(); ++i) ranked[i] = fam[i].offset_ghz;
    const auto centered = pairwise_center(ranked);
    for (auto& c : curves) {
      for (std::size_t i = 0; i < fam.size(); ++i) {
        if (fam[i].track == c.track) {
          c.offsets_ghz.push_back(fam[i].offset_ghz);
          c.centered_ghz.push_back(centered[i]);
          c.intensity.push_back(fam[i].intensity);
        }
      }
    }
  }
  return curves;
}

}  // namespace snvkit
