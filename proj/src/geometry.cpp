#include "memrx/geometry.hpp"

namespace memrx {

namespace {

// A point counts as inside the region if it lies within the closed square
// (boundary included) in the imaging plane.
bool inside_region(const GridSpec& grid, const Vec3& p) {
  return std::abs(p.x()) <= grid.half_width && std::abs(p.y()) <= grid.half_width;
}

}  // namespace

void Geometry::validate() const {
  grid.validate();
  for (const auto& s : sensors) {
    s.validate();
    if (inside_region(grid, s.position))
      throw std::invalid_argument("Geometry: sensor inside the imaging region");
  }
  for (const auto& c : coils) {
    if (inside_region(grid, c.center))
      throw std::invalid_argument("Geometry: coil center inside the imaging region");
  }
}

GeometryConfig default_geometry_config() {
  GeometryConfig cfg;
  cfg.grid = {0.05, 75};
  cfg.sensor_layers = {
      {0.06, 55, 0.054, Vec3(1, 0, 0)},
      {0.065, 55, 0.054, Vec3(0, 1, 0)},
  };
  cfg.coils = {120, 0.01, 0.5e-6, 45, 1.0, Vec3(0, 1, 0)};
  return cfg;
}

GeometryConfig desk_scale_geometry_config() {
  GeometryConfig cfg;
  cfg.grid = {0.05, 25};
  cfg.sensor_layers = {
      {0.06, 20, 0.054, Vec3(1, 0, 0)},
      {0.065, 20, 0.054, Vec3(0, 1, 0)},
  };
  cfg.coils = {60, 0.01, 0.5e-6, 45, 1.0, Vec3(0, 1, 0)};
  return cfg;
}

Geometry build_geometry(const GeometryConfig& config) {
  config.grid.validate();
  Geometry g;
  g.grid = config.grid;

  for (const auto& layer : config.sensor_layers) {
    if (layer.count < 1) throw std::invalid_argument("build_geometry: sensor count must be >= 1");
    if (layer.x_extent <= 0.0)
      throw std::invalid_argument("build_geometry: sensor x_extent must be positive");
    for (int i = 0; i < layer.count; ++i) {
      const double x =
          layer.count == 1
              ? 0.0
              : -layer.x_extent + 2.0 * layer.x_extent * i / (layer.count - 1);
      Sensor s;
      s.position = Vec3(x, layer.y, 0.0);
      s.direction = layer.direction.normalized();
      g.sensors.push_back(s);
    }
  }

  // Coils equispaced (midpoint rule) along the U-shaped polyline: down the
  // left edge, across the bottom, up the right edge, at the given standoff.
  const auto& cc = config.coils;
  if (cc.count < 1) throw std::invalid_argument("build_geometry: coil count must be >= 1");
  const double d = config.grid.half_width + cc.standoff;
  const double leg = 2.0 * d;
  const double total = 3.0 * leg;
  for (int i = 0; i < cc.count; ++i) {
    const double s = (i + 0.5) * total / cc.count;
    Vec3 center;
    if (s < leg) {
      center = Vec3(-d, d - s, 0.0);
    } else if (s < 2.0 * leg) {
      center = Vec3(-d + (s - leg), -d, 0.0);
    } else {
      center = Vec3(d, -d + (s - 2.0 * leg), 0.0);
    }
    Coil coil;
    coil.center = center;
    coil.normal = cc.normal.normalized();
    coil.radius = cc.radius;
    coil.n_segments = cc.n_segments;
    coil.current = cc.current;
    coil.build_segments();
    g.coils.push_back(std::move(coil));
  }

  g.validate();
  return g;
}

}  // namespace memrx
