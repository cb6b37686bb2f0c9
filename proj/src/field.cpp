#include "memrx/field.hpp"

namespace memrx {

Vec3 coil_field(const Coil& coil, const Vec3& point) {
  Vec3 h = Vec3::Zero();
  const int ns = coil.n_segments;
  for (int i = 0; i < ns; ++i) {
    const Vec3 r1 = point - coil.segment_points[i];
    const Vec3 r2 = point - coil.segment_points[i + 1];
    const double a1 = r1.norm();
    const double a2 = r2.norm();
    const double denom1 = a1 * a2;
    const double denom2 = a1 * a2 + r1.dot(r2);
    if (denom1 < 1e-300 || std::abs(denom2) < 1e-300)
      throw std::domain_error("coil_field: evaluation point on a coil segment");
    h += (a1 + a2) / denom1 * r1.cross(r2) / denom2;
  }
  return h * (coil.current / (4.0 * M_PI));
}

double dipole_kernel_entry(const Sensor& sensor, const Vec3& voxel_center,
                           const Vec3& h_at_voxel) {
  const Vec3 r = sensor.position - voxel_center;
  const double d = r.norm();
  if (d < 1e-300)
    throw std::domain_error("dipole_kernel_entry: sensor coincides with voxel center");
  const double d3 = d * d * d;
  const double d5 = d3 * d * d;
  const Vec3 field = 3.0 * r * r.dot(h_at_voxel) / d5 - h_at_voxel / d3;
  return kMu0 / (4.0 * M_PI) * sensor.direction.dot(field);
}

}  // namespace memrx
