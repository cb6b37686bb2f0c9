#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "memrx/field.hpp"
#include "memrx/geometry.hpp"
#include "memrx/leadfield.hpp"
#include "memrx/measurement.hpp"

#include <Eigen/SVD>

using namespace memrx;

namespace {

GeometryConfig tiny_config() {
  GeometryConfig cfg;
  cfg.grid = {0.05, 8};
  cfg.sensor_layers = {{0.06, 4, 0.05, Vec3(1, 0, 0)}, {0.065, 4, 0.05, Vec3(0, 1, 0)}};
  cfg.coils = {10, 0.01, 0.5e-6, 45, 1.0, Vec3(0, 1, 0)};
  return cfg;
}

Coil test_coil(double radius, int n_segments, double current = 1.0) {
  Coil c;
  c.center = Vec3(0.2, 0.3, -0.1);
  c.normal = Vec3(0, 0, 1);
  c.radius = radius;
  c.n_segments = n_segments;
  c.current = current;
  c.build_segments();
  return c;
}

}  // namespace

TEST_CASE("default geometry matches the reference setup") {
  const Geometry g = build_geometry(default_geometry_config());
  CHECK(g.n_sensors() == 110);
  CHECK(g.n_coils() == 120);
  CHECK(g.grid.n_voxels() == 75 * 75);
}

TEST_CASE("minimal geometry") {
  GeometryConfig cfg;
  cfg.grid = {0.05, 2};
  cfg.sensor_layers = {{0.06, 1, 0.05, Vec3(1, 0, 0)}};
  cfg.coils = {1, 0.01, 0.5e-6, 45, 1.0, Vec3(0, 1, 0)};
  const Geometry g = build_geometry(cfg);
  CHECK(g.grid.n_voxels() == 4);
  CHECK(g.n_sensors() == 1);
  CHECK(g.n_coils() == 1);
}

TEST_CASE("zero standoff places coils on the region boundary and is rejected") {
  GeometryConfig cfg = tiny_config();
  cfg.coils.standoff = 0.0;
  CHECK_THROWS_AS(build_geometry(cfg), std::invalid_argument);
}

TEST_CASE("sensors inside the region are rejected") {
  GeometryConfig cfg = tiny_config();
  cfg.sensor_layers[0].y = 0.0;
  CHECK_THROWS_AS(build_geometry(cfg), std::invalid_argument);
}

TEST_CASE("coil segments lie on the circle and close the polygon") {
  const Coil c = test_coil(0.01, 45);
  REQUIRE(c.segment_points.size() == 46);
  CHECK((c.segment_points.back() - c.segment_points.front()).norm() == 0.0);
  for (const auto& p : c.segment_points)
    CHECK(std::abs((p - c.center).norm() - c.radius) < 1e-12 * c.radius);
}

TEST_CASE("coil center field matches the analytic loop value") {
  const double a = 0.01;
  const double i0 = 2.5;
  const double analytic = i0 / (2.0 * a);

  const Vec3 h45 = coil_field(test_coil(a, 45, i0), test_coil(a, 45).center);
  CHECK(std::abs(h45.norm() - analytic) / analytic < 0.01);
  CHECK(h45.normalized().isApprox(Vec3(0, 0, 1), 1e-12));

  const Vec3 h36 = coil_field(test_coil(a, 36, i0), test_coil(a, 36).center);
  CHECK(std::abs(h36.norm() - analytic) / analytic < 0.01);
}

TEST_CASE("segment-count convergence is monotone at the center") {
  const double a = 0.01;
  const double analytic = 1.0 / (2.0 * a);
  double prev_err = 1e300;
  for (int ns : {12, 24, 36, 45, 90}) {
    const Coil c = test_coil(a, ns);
    const double err = std::abs(coil_field(c, c.center).norm() - analytic);
    CHECK(err <= prev_err);
    prev_err = err;
  }
}

TEST_CASE("on-axis field has no transverse component") {
  const Coil c = test_coil(0.01, 45);
  const Vec3 h = coil_field(c, c.center + Vec3(0, 0, 0.02));
  CHECK(std::abs(h.x()) < 1e-12 * h.norm());
  CHECK(std::abs(h.y()) < 1e-12 * h.norm());
}

TEST_CASE("field is linear in the current") {
  Coil c1 = test_coil(0.01, 45, 1.0);
  Coil c2 = test_coil(0.01, 45, 2.0);
  const Vec3 p(0.21, 0.32, 0.1);
  CHECK((coil_field(c2, p) - 2.0 * coil_field(c1, p)).norm() == 0.0);
}

TEST_CASE("evaluation on a segment is rejected") {
  const Coil c = test_coil(0.01, 45);
  CHECK_THROWS_AS(coil_field(c, c.segment_points[3]), std::domain_error);
}

TEST_CASE("dipole kernel hand-computed values") {
  Sensor s;
  s.direction = Vec3(0, 0, 1);

  SUBCASE("zero field gives zero") {
    s.position = Vec3(0.1, 0.2, 0.3);
    CHECK(dipole_kernel_entry(s, Vec3(0, 0, 0), Vec3::Zero()) == 0.0);
  }

  SUBCASE("transverse geometry reduces to -mu0 h / (4 pi d^3)") {
    const double d = 0.07, h = 3.2;
    s.position = Vec3(d, 0, 0);
    const double got = dipole_kernel_entry(s, Vec3(0, 0, 0), Vec3(0, 0, h));
    const double expected = -kMu0 * h / (4.0 * M_PI * d * d * d);
    CHECK(std::abs(got - expected) < 1e-15 * std::abs(expected));
  }

  SUBCASE("linearity in the field") {
    s.position = Vec3(0.03, 0.05, 0.01);
    const Vec3 h(0.4, -1.2, 2.0);
    const double e1 = dipole_kernel_entry(s, Vec3(0.001, -0.002, 0), h);
    const double e2 = dipole_kernel_entry(s, Vec3(0.001, -0.002, 0), 2.0 * h);
    CHECK(e2 == 2.0 * e1);
  }

  SUBCASE("1/d^3 decay") {
    const Vec3 h(0.3, 0.7, -0.2);
    s.direction = Vec3(0, 1, 0);
    s.position = Vec3(0, 0.04, 0);
    const double near = dipole_kernel_entry(s, Vec3::Zero(), h);
    s.position = Vec3(0, 0.08, 0);
    const double far = dipole_kernel_entry(s, Vec3::Zero(), h);
    CHECK(std::abs(near / far - 8.0) < 1e-10 * 8.0);
  }

  SUBCASE("coincident sensor and voxel rejected") {
    s.position = Vec3(0.01, 0.02, 0.03);
    CHECK_THROWS_AS(dipole_kernel_entry(s, s.position, Vec3(1, 0, 0)), std::domain_error);
  }
}

TEST_CASE("lead field assembly") {
  const Geometry g = build_geometry(tiny_config());
  const LeadField lf = assemble_lead_field(g);

  SUBCASE("dimensions and normalization") {
    CHECK(lf.matrix.rows() == g.n_coils() * g.n_sensors());
    CHECK(lf.matrix.cols() == g.grid.n_voxels());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(lf.matrix);
    CHECK(std::abs(svd.singularValues()(0) - 1.0) < 1e-8);
    CHECK(lf.scale > 0.0);
  }

  SUBCASE("forward map is linear") {
    Eigen::VectorXd n1 = Eigen::VectorXd::LinSpaced(lf.matrix.cols(), 0.0, 1.0);
    Eigen::VectorXd n2 = Eigen::VectorXd::Constant(lf.matrix.cols(), 0.25);
    const Eigen::VectorXd lhs = lf.matrix * (n1 + n2);
    const Eigen::VectorXd rhs = lf.matrix * n1 + lf.matrix * n2;
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-15 * lhs.cwiseAbs().maxCoeff());
  }

  SUBCASE("per-coil blocks match the full raw matrix") {
    const Eigen::MatrixXd raw = assemble_lead_field_raw(g, false);
    for (int c : {0, 3, g.n_coils() - 1}) {
      const Eigen::MatrixXd block = assemble_coil_block(g, c);
      const Eigen::MatrixXd ref = raw.middleRows(c * g.n_sensors(), g.n_sensors());
      CHECK((block - ref).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("noise simulation") {
  const Geometry g = build_geometry(tiny_config());
  const LeadField lf = assemble_lead_field(g);
  ConcentrationImage img;
  img.grid = g.grid;
  img.n_max = 1.0;
  img.values = Eigen::VectorXd::Zero(g.grid.n_voxels());
  img.values(10) = 1.0;
  img.values(27) = 1.0;

  SUBCASE("realized SNR is exact") {
    const MeasurementSet ms = simulate_data(lf, img, 80.0, 42);
    const Eigen::VectorXd clean = lf.matrix * img.values;
    const double ratio = (ms.values - clean).norm() / clean.norm();
    // Subtraction reintroduces rounding at the scale of the clean signal.
    CHECK(std::abs(ratio / 1e-4 - 1.0) < 1e-9);
  }

  SUBCASE("infinite SNR is noiseless") {
    const MeasurementSet ms = simulate_data(
        lf, img, std::numeric_limits<double>::infinity(), 42);
    CHECK((ms.values - lf.matrix * img.values).norm() == 0.0);
  }

  SUBCASE("seeded runs are bit-identical") {
    const MeasurementSet a = simulate_data(lf, img, 60.0, 7);
    const MeasurementSet b = simulate_data(lf, img, 60.0, 7);
    CHECK((a.values - b.values).cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("zero signal with finite SNR rejected") {
    img.values.setZero();
    CHECK_THROWS_AS(simulate_data(lf, img, 80.0, 1), std::invalid_argument);
  }
}
