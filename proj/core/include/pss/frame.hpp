#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <string>
#include <vector>

#include "pss/grid.hpp"
#include "pss/problem.hpp"

namespace pss {

/// Per-node values of the six 1-form coefficients, the connection data and
/// (when present) the second fundamental form, plus a degeneracy mask where
/// |w1 ^ w2| falls under a scale-free threshold.
struct FrameField {
  GridSpec spec;
  std::array<std::vector<double>, 6> f;  ///< f11,f12,f21,f22,f31,f32
  std::vector<double> a, b, c;           ///< empty when the problem has no sff
  std::vector<std::uint8_t> mask;        ///< 1 = degenerate node
  double threshold = 0;                  ///< absolute wedge threshold used
  int masked_count = 0;

  bool has_sff() const { return !a.empty(); }
  bool fully_degenerate() const {
    return masked_count == static_cast<int>(spec.size());
  }

  struct Rect {
    int i0 = 0, j0 = 0, i1 = -1, j1 = -1;  // inclusive; empty when i1 < i0
    int width() const { return i1 - i0 + 1; }
    int height() const { return j1 - j0 + 1; }
    long area() const {
      return i1 < i0 || j1 < j0 ? 0 : long(width()) * long(height());
    }
  };
  /// Largest axis-aligned all-clear sub-rectangle of the mask.
  Rect largest_clear_rect() const;
  std::string mask_report() const;

  /// Restrict the field to a node sub-rectangle (inclusive bounds).
  FrameField crop(const Rect& r) const;
};

/// Evaluate the problem's 1-forms (and sff, when present) on a solution
/// grid. Every free parameter used by the coefficients must be bound in
/// `params`. Degeneracy threshold: 1e-6 times the grid maximum of the
/// |f11 f22| + |f21 f12| products.
FrameField evaluate_forms(const ProblemDef& problem, const SolutionGrid& sol,
                          const std::map<std::string, double>& params = {});

struct SeedPose {
  Eigen::Vector3d position = Eigen::Vector3d::Zero();
  Eigen::Matrix3d frame = Eigen::Matrix3d::Identity();  // columns e1, e2, N
  static SeedPose identity() { return {}; }
};

/// Per-node second-fundamental-form samples, separable from the FrameField
/// so corrupted variants can be integrated against the same metric data.
struct SffValues {
  std::vector<double> a, b, c;
  static SffValues from(const FrameField& ff) { return {ff.a, ff.b, ff.c}; }
};

/// Reconstructed surface on the coarse (odd-subsampled) grid.
struct ImmersedSurface {
  GridSpec spec;
  std::vector<Eigen::Vector3d> position;
  std::vector<Eigen::Matrix3d> frame;    ///< columns e1, e2, N
  std::vector<double> compat;            ///< x-then-t vs t-then-x mismatch
  std::vector<std::uint8_t> mask;
  double max_compat = 0;
  double max_orthonormality_dev = 0;
};

/// Integrate the moving frame
///   dX = w1 e1 + w2 e2,  de1 = w3 e2 + w31 N,  de2 = -w3 e1 + w32 N,
///   dN = -w31 e1 - w32 e2,  with w31 = a w1 + b w2, w32 = b w1 + c w2,
/// by classical RK4 along grid lines; the field must be sampled on a
/// half-step refined grid (odd dimensions), one RK4 step spans two cells.
/// Frames are projected back to the nearest rotation after every step.
/// Throws DegeneracyError when an integration path crosses the mask.
ImmersedSurface integrate_frame(const FrameField& fine, const SffValues& sff,
                                const SeedPose& seed);

}  // namespace pss
