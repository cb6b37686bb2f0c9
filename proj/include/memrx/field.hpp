// Magnetostatic kernels: line-segment Biot-Savart coil field and the
// dipole sensitivity entry of the lead field matrix.
#pragma once

#include "memrx/geometry.hpp"

namespace memrx {

inline constexpr double kMu0 = 4.0e-7 * M_PI;

// H(point) summed over the coil's line segments,
//   (1/4pi) sum_i (|r1|+|r2|)/(|r1||r2|) * (r1 x r2)/(|r1||r2| + r1.r2) * I0,
// with r1, r2 the vectors from segment start/end to the evaluation point.
Vec3 coil_field(const Coil& coil, const Vec3& point);

// (mu0/4pi) * nu . [3 r (r.H)/|r|^5 - H/|r|^3], r = sensor position - voxel center.
double dipole_kernel_entry(const Sensor& sensor, const Vec3& voxel_center,
                           const Vec3& h_at_voxel);

}  // namespace memrx
