#pragma once

#include <array>
#include <string>
#include <string_view>

namespace snvkit {

/// Vector in the cubic crystal frame ([100], [010], [001]). Used both for
/// directions and for magnetic fields in Tesla.
struct LabVector {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  double norm() const;
};

/// The four <111> orientation classes of the defect symmetry axis.
///
/// The defect is inversion symmetric, so each class is a line rather than a
/// direction. The axis vector used for each class is the representative with
/// a positive [001] component: [111] -> (1,1,1), [-111] -> (-1,1,1),
/// [1-11] -> (1,-1,1), [11-1] -> (-1,-1,1). The defect x axis is the unit
/// vector along (a, b, -2) for axis (a, b, 1), i.e. [11-2] for [111].
enum class DefectOrientation { Axis111, AxisBar111, Axis1Bar11, Axis11Bar1 };

inline constexpr std::array<DefectOrientation, 4> kAllOrientations = {
    DefectOrientation::Axis111, DefectOrientation::AxisBar111,
    DefectOrientation::Axis1Bar11, DefectOrientation::Axis11Bar1};

std::string to_string(DefectOrientation o);
/// Accepts "111", "[111]", "-111", "[-111]", "1-11", "11-1" (brackets optional).
DefectOrientation parse_orientation(std::string_view text);

/// Field expressed in the defect frame.
struct DefectFrameField {
  double b_axial = 0.0;  // Tesla, along the symmetry axis
  double b_perp = 0.0;   // Tesla, magnitude of the transverse part, >= 0
  double phi = 0.0;      // radians, azimuth of the transverse part
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Rows are the defect (x, y, z) axes expressed in the crystal frame.
Matrix3 defect_rotation(DefectOrientation orientation);

DefectFrameField field_in_defect_frame(const LabVector& b_lab, DefectOrientation orientation);

}  // namespace snvkit
