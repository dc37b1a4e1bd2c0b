#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "snvkit/geometry.hpp"
#include "snvkit/spin_hamiltonian.hpp"

namespace snvkit {

/// Zero-field optical lines, in order of decreasing energy.
///   A: upper excited -> lower ground    B: upper excited -> upper ground
///   C: lower excited -> lower ground    D: lower excited -> upper ground
enum class Family { A, B, C, D };

inline constexpr std::array<Family, 4> kAllFamilies = {Family::A, Family::B, Family::C, Family::D};

char to_char(Family f);
Family parse_family(std::string_view text);

/// Identity of a line that survives re-sorting: the orbital blocks of the
/// excited and ground states it connects.
struct TrackId {
  int excited_orbital = 1;
  int ground_orbital = 1;

  friend bool operator==(const TrackId&, const TrackId&) = default;
};

struct TransitionLine {
  Family family = Family::C;
  int index = -1;            // rank by decreasing offset within family; -1 when the family is one merged line
  double offset_ghz = 0.0;   // relative to the electronic transition center
  double intensity = 0.0;    // spin-overlap proxy, [0, 1]
  bool spin_conserving = false;
  TrackId track{};
  int multiplicity = 1;      // number of degenerate lines merged into this one
  std::optional<double> sigma_ghz;
};

inline constexpr double kMergeToleranceGhz = 1e-6;

/// All 16 unmerged lines (4 per family), ranked by decreasing offset within
/// each family.
std::vector<TransitionLine> raw_transitions(const EigenSystem& ground, const EigenSystem& excited);

/// Labeled line table with degenerate lines merged. A merged line carries the
/// summed intensity divided by the number of distinct excited states feeding it.
std::vector<TransitionLine> transition_table(const EigenSystem& ground, const EigenSystem& excited,
                                             double merge_tol_ghz = kMergeToleranceGhz);

/// Lines of one family, sorted by decreasing offset.
std::vector<TransitionLine> family_lines(std::span<const TransitionLine> lines, Family family);

/// Outer pair (positions 0, 3) and inner pair (positions 1, 2) are each
/// shifted to zero mean. Positions are taken as given.
std::array<double, 4> pairwise_center(const std::array<double, 4>& offsets);
/// Same, for a runtime-sized input; throws CountMismatch unless size is 4.
std::array<double, 4> pairwise_center(std::span<const double> offsets);

enum class SweepSource { Model, Measured };

struct SweepEntry {
  double field_tesla = 0.0;
  std::vector<TransitionLine> lines;  // merged table
  std::vector<TransitionLine> raw;    // unmerged lines, model sweeps only
  std::vector<Family> incomplete;     // families with fewer than 4 lines at B != 0
};

struct SweepMetadata {
  DefectOrientation orientation = DefectOrientation::Axis111;
  LabVector direction{0.0, 0.0, 1.0};
  ManifoldParameters ground;
  ManifoldParameters excited;
  PhysicalConstants constants;
};

struct SweepTable {
  SweepSource source = SweepSource::Model;
  std::vector<SweepEntry> entries;
  std::optional<SweepMetadata> meta;

  std::vector<double> fields() const;
};

/// Per-field transition tables along a lab-frame direction. `fields_tesla`
/// are magnitudes along `direction` and must be strictly increasing.
SweepTable zeeman_sweep(const ManifoldParameters& ground, const ManifoldParameters& excited,
                        const PhysicalConstants& constants, std::span<const double> fields_tesla,
                        const LabVector& direction, DefectOrientation orientation);

/// One line of a family followed continuously across a model sweep. Labeled
/// by its rank at the highest field of the sweep (e.g. "C0").
struct TrackedCurve {
  Family family = Family::C;
  int label_index = 0;
  TrackId track{};
  std::vector<double> offsets_ghz;
  std::vector<double> centered_ghz;
  std::vector<double> intensity;

  std::string label() const;
};

std::vector<TrackedCurve> tracked_curves(const SweepTable& table, Family family);

}  // namespace snvkit
