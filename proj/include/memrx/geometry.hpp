// Imaging geometry: voxel grid, sensor layers, excitation coil array.
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace memrx {

using Vec3 = Eigen::Vector3d;

// Regular n x n lattice of voxel centers covering [-w, w]^2 in the z = 0 plane.
struct GridSpec {
  double half_width = 0.05;
  int n_per_side = 75;

  double spacing() const { return 2.0 * half_width / n_per_side; }
  int n_voxels() const { return n_per_side * n_per_side; }

  // Row-major layout: v = iy * n_per_side + ix.
  Vec3 voxel_center(int v) const {
    const int ix = v % n_per_side;
    const int iy = v / n_per_side;
    const double h = spacing();
    return {-half_width + (ix + 0.5) * h, -half_width + (iy + 0.5) * h, 0.0};
  }

  void validate() const {
    if (n_per_side < 2) throw std::invalid_argument("GridSpec: n_per_side must be >= 2");
    if (half_width <= 0.0) throw std::invalid_argument("GridSpec: half_width must be positive");
  }
};

struct Sensor {
  Vec3 position;
  Vec3 direction;  // unit measurement component

  void validate() const {
    if (std::abs(direction.norm() - 1.0) > 1e-12)
      throw std::invalid_argument("Sensor: direction must be a unit vector");
  }
};

// Circular coil approximated by a closed polygon of line segments.
struct Coil {
  Vec3 center;
  Vec3 normal;
  double radius = 0.5e-6;
  int n_segments = 45;
  double current = 1.0;  // I_0 in amperes
  std::vector<Vec3> segment_points;  // n_segments + 1 points, last == first

  void build_segments() {
    if (n_segments < 3) throw std::invalid_argument("Coil: n_segments must be >= 3");
    if (radius <= 0.0) throw std::invalid_argument("Coil: radius must be positive");
    const Vec3 n = normal.normalized();
    // Orthonormal basis in the coil plane.
    Vec3 e1 = (std::abs(n.x()) < 0.9) ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
    e1 = (e1 - e1.dot(n) * n).normalized();
    const Vec3 e2 = n.cross(e1);
    segment_points.resize(n_segments + 1);
    for (int i = 0; i < n_segments; ++i) {
      const double th = 2.0 * M_PI * i / n_segments;
      segment_points[i] = center + radius * (std::cos(th) * e1 + std::sin(th) * e2);
    }
    segment_points[n_segments] = segment_points[0];
  }
};

struct Geometry {
  GridSpec grid;
  std::vector<Sensor> sensors;
  std::vector<Coil> coils;

  int n_sensors() const { return static_cast<int>(sensors.size()); }
  int n_coils() const { return static_cast<int>(coils.size()); }

  void validate() const;
};

// One horizontal layer of equispaced sensors sharing a measurement direction.
struct SensorLayerConfig {
  double y = 0.06;
  int count = 55;
  double x_extent = 0.054;  // positions span [-x_extent, x_extent]
  Vec3 direction = Vec3(1, 0, 0);
};

struct CoilArrayConfig {
  int count = 120;
  double standoff = 0.01;   // U-path distance beyond the region edge
  double radius = 0.5e-6;
  int n_segments = 45;
  double current = 1.0;
  Vec3 normal = Vec3(0, 1, 0);
};

struct GeometryConfig {
  GridSpec grid;
  std::vector<SensorLayerConfig> sensor_layers;
  CoilArrayConfig coils;
};

// Reference setup: 75x75 grid, two 55-sensor layers, 120 coils on the U-path.
GeometryConfig default_geometry_config();

// Reduced setup for fast experiments: 25x25 grid, two 20-sensor layers, 60 coils.
GeometryConfig desk_scale_geometry_config();

Geometry build_geometry(const GeometryConfig& config);

}  // namespace memrx
