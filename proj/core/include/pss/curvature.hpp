#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "pss/frame.hpp"
#include "pss/grid.hpp"

namespace pss {

struct CurvatureStats {
  double mean_k = 0;
  double min_k = 0, max_k = 0;
  double max_abs_k_plus_1 = 0;
  int audited = 0;
  std::vector<double> k;          ///< per-node K; NaN where not audited
  std::vector<int> histogram;     ///< 10 bins over [hist_lo, hist_hi]
  double hist_lo = 0, hist_hi = 0;
  GridSpec spec;

  std::string str() const;
};

/// Gaussian curvature from positions alone: first fundamental form by
/// second-order central differences, then the Brioschi formula. Only interior
/// nodes with a full difference stencil clear of the mask are audited.
/// Throws DegeneracyError when a metric cell degenerates (EG - F^2 ~ 0).
CurvatureStats brioschi_curvature(const GridSpec& spec,
                                  std::span<const Eigen::Vector3d> position,
                                  std::span<const std::uint8_t> mask = {});

CurvatureStats curvature_check(const ImmersedSurface& surf);

}  // namespace pss
