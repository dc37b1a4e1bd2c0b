#include "snvkit/geometry.hpp"

#include <cmath>

#include "snvkit/errors.hpp"

namespace snvkit {

double LabVector::norm() const { return std::sqrt(x * x + y * y + z * z); }

namespace {

struct AxisSigns {
  double a;
  double b;
};

AxisSigns axis_signs(DefectOrientation o) {
  switch (o) {
    case DefectOrientation::Axis111: return {1.0, 1.0};
    case DefectOrientation::AxisBar111: return {-1.0, 1.0};
    case DefectOrientation::Axis1Bar11: return {1.0, -1.0};
    case DefectOrientation::Axis11Bar1: return {-1.0, -1.0};
  }
  return {1.0, 1.0};
}

std::array<double, 3> cross(const std::array<double, 3>& u, const std::array<double, 3>& v) {
  return {u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]};
}

}  // namespace

std::string to_string(DefectOrientation o) {
  switch (o) {
    case DefectOrientation::Axis111: return "[111]";
    case DefectOrientation::AxisBar111: return "[-111]";
    case DefectOrientation::Axis1Bar11: return "[1-11]";
    case DefectOrientation::Axis11Bar1: return "[11-1]";
  }
  return "?";
}

DefectOrientation parse_orientation(std::string_view text) {
  if (!text.empty() && text.front() == '[' && text.back() == ']') {
    text = text.substr(1, text.size() - 2);
  }
  if (text == "111") return DefectOrientation::Axis111;
  if (text == "-111") return DefectOrientation::AxisBar111;
  if (text == "1-11") return DefectOrientation::Axis1Bar11;
  if (text == "11-1") return DefectOrientation::Axis11Bar1;
  throw ConfigError("unknown defect orientation '" + std::string(text) + "'");
}

Matrix3 defect_rotation(DefectOrientation orientation) {
  const auto [a, b] = axis_signs(orientation);
  const double inv3 = 1.0 / std::sqrt(3.0);
  const double inv6 = 1.0 / std::sqrt(6.0);
  const std::array<double, 3> ez{a * inv3, b * inv3, inv3};
  const std::array<double, 3> ex{a * inv6, b * inv6, -2.0 * inv6};
  const std::array<double, 3> ey = cross(ez, ex);
  return {ex, ey, ez};
}

DefectFrameField field_in_defect_frame(const LabVector& b_lab, DefectOrientation orientation) {
  const Matrix3 r = defect_rotation(orientation);
  const std::array<double, 3> v{b_lab.x, b_lab.y, b_lab.z};
  std::array<double, 3> d{};
  for (int i = 0; i < 3; ++i) {
    d[i] = r[i][0] * v[0] + r[i][1] * v[1] + r[i][2] * v[2];
  }
  DefectFrameField out;
  out.b_axial = d[2];
  out.b_perp = std::hypot(d[0], d[1]);
  out.phi = out.b_perp > 0.0 ? std::atan2(d[1], d[0]) : 0.0;
  return out;
}

}  // namespace snvkit
