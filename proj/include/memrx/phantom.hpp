// Procedural binary phantoms rendered from analytic shapes in
// region-relative coordinates.
#pragma once

#include "memrx/geometry.hpp"

#include <Eigen/Dense>
#include <string>

namespace memrx {

struct ConcentrationImage {
  Eigen::VectorXd values;  // length N_v, row-major on the grid
  GridSpec grid;
  double n_max = 1.0;

  void validate() const {
    if (values.size() != grid.n_voxels())
      throw std::invalid_argument("ConcentrationImage: size does not match grid");
    if (n_max <= 0.0) throw std::invalid_argument("ConcentrationImage: n_max must be positive");
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (values(i) < 0.0 || values(i) > n_max)
        throw std::invalid_argument("ConcentrationImage: value outside [0, n_max]");
  }
};

enum class PhantomKind { CsLetters, Smiley, Tumor };

PhantomKind phantom_kind_from_string(const std::string& name);
std::string to_string(PhantomKind kind);

// Indicator of the analytic phantom region at a point in relative
// coordinates (u, v) in [-1, 1]^2.
bool phantom_contains(PhantomKind kind, double u, double v);

ConcentrationImage make_phantom(PhantomKind kind, const GridSpec& grid);

}  // namespace memrx
