#include "memrx/phantom.hpp"

namespace memrx {

namespace {

bool in_rect(double u, double v, double u0, double u1, double v0, double v1) {
  return u >= u0 && u <= u1 && v >= v0 && v <= v1;
}

bool in_disk(double u, double v, double cu, double cv, double r) {
  const double du = u - cu, dv = v - cv;
  return du * du + dv * dv <= r * r;
}

bool cs_letters(double u, double v) {
  // Block letter C on the left half.
  if (in_rect(u, v, -0.85, -0.67, -0.60, 0.60)) return true;
  if (in_rect(u, v, -0.85, -0.15, 0.42, 0.60)) return true;
  if (in_rect(u, v, -0.85, -0.15, -0.60, -0.42)) return true;
  // Block letter S on the right half.
  if (in_rect(u, v, 0.15, 0.85, 0.42, 0.60)) return true;
  if (in_rect(u, v, 0.15, 0.33, 0.00, 0.60)) return true;
  if (in_rect(u, v, 0.15, 0.85, -0.09, 0.09)) return true;
  if (in_rect(u, v, 0.67, 0.85, -0.60, 0.00)) return true;
  if (in_rect(u, v, 0.15, 0.85, -0.60, -0.42)) return true;
  return false;
}

bool smiley(double u, double v) {
  const double r2 = u * u + v * v;
  // Face outline.
  if (r2 <= 0.85 * 0.85 && r2 >= 0.72 * 0.72) return true;
  // Eyes.
  if (in_disk(u, v, -0.30, 0.30, 0.12)) return true;
  if (in_disk(u, v, 0.30, 0.30, 0.12)) return true;
  // Mouth: lower arc of an annulus.
  if (v < -0.15 && r2 <= 0.55 * 0.55 && r2 >= 0.42 * 0.42) return true;
  return false;
}

bool tumor(double u, double v) {
  // Tumor disk with a thin vessel strip touching it.
  if (in_disk(u, v, 0.15, -0.10, 0.35)) return true;
  if (in_rect(u, v, -0.90, 0.25, 0.15, 0.27)) return true;
  return false;
}

}  // namespace

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "cs_letters") return PhantomKind::CsLetters;
  if (name == "smiley") return PhantomKind::Smiley;
  if (name == "tumor") return PhantomKind::Tumor;
  throw std::invalid_argument("unknown phantom kind: " + name);
}

std::string to_string(PhantomKind kind) {
  switch (kind) {
    case PhantomKind::CsLetters: return "cs_letters";
    case PhantomKind::Smiley: return "smiley";
    case PhantomKind::Tumor: return "tumor";
  }
  throw std::invalid_argument("unknown phantom kind");
}

bool phantom_contains(PhantomKind kind, double u, double v) {
  switch (kind) {
    case PhantomKind::CsLetters: return cs_letters(u, v);
    case PhantomKind::Smiley: return smiley(u, v);
    case PhantomKind::Tumor: return tumor(u, v);
  }
  return false;
}

ConcentrationImage make_phantom(PhantomKind kind, const GridSpec& grid) {
  grid.validate();
  if (grid.n_per_side < 15)
    throw std::invalid_argument("make_phantom: grid must be at least 15x15");
  ConcentrationImage img;
  img.grid = grid;
  img.n_max = 1.0;
  img.values.resize(grid.n_voxels());
  for (int v = 0; v < grid.n_voxels(); ++v) {
    const Vec3 c = grid.voxel_center(v);
    const double ru = c.x() / grid.half_width;
    const double rv = c.y() / grid.half_width;
    img.values(v) = phantom_contains(kind, ru, rv) ? 1.0 : 0.0;
  }
  if (img.values.maxCoeff() <= 0.0)
    throw std::runtime_error("make_phantom: phantom rendered empty");
  return img;
}

}  // namespace memrx
