#include "pss/curvature.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

std::string CurvatureStats::str() const {
  std::ostringstream os;
  os << "curvature audit: " << audited << " nodes, mean K = " << mean_k
     << ", K in [" << min_k << ", " << max_k
     << "], max |K+1| = " << max_abs_k_plus_1;
  return os.str();
}

CurvatureStats brioschi_curvature(const GridSpec& spec,
                                  std::span<const Eigen::Vector3d> position,
                                  std::span<const std::uint8_t> mask) {
  if (position.size() != spec.size())
    throw Error("position array does not match the grid");
  if (spec.nx < 5 || spec.nt < 5)
    throw Error("curvature audit needs at least a 5x5 grid");
  const double hx = spec.dx(), ht = spec.dt();

  auto masked = [&](int i, int j) {
    return !mask.empty() && mask[spec.idx(i, j)] != 0;
  };

  const double nan = std::numeric_limits<double>::quiet_NaN();
  // E, F, G on the interior (central differences of X)
  std::vector<double> E(spec.size(), nan), F(spec.size(), nan),
      G(spec.size(), nan);
  for (int j = 1; j + 1 < spec.nt; ++j) {
    for (int i = 1; i + 1 < spec.nx; ++i) {
      if (masked(i - 1, j) || masked(i + 1, j) || masked(i, j - 1) ||
          masked(i, j + 1))
        continue;
      Eigen::Vector3d xu =
          (position[spec.idx(i + 1, j)] - position[spec.idx(i - 1, j)]) /
          (2 * hx);
      Eigen::Vector3d xt =
          (position[spec.idx(i, j + 1)] - position[spec.idx(i, j - 1)]) /
          (2 * ht);
      std::size_t n = spec.idx(i, j);
      E[n] = xu.dot(xu);
      F[n] = xu.dot(xt);
      G[n] = xt.dot(xt);
    }
  }

  CurvatureStats stats;
  stats.spec = spec;
  stats.k.assign(spec.size(), nan);

  double sum = 0;
  stats.min_k = std::numeric_limits<double>::infinity();
  stats.max_k = -std::numeric_limits<double>::infinity();

  auto have = [&](int i, int j) { return std::isfinite(E[spec.idx(i, j)]); };

  for (int j = 2; j + 2 < spec.nt; ++j) {
    for (int i = 2; i + 2 < spec.nx; ++i) {
      bool ok = true;
      for (int dj = -1; dj <= 1 && ok; ++dj)
        for (int di = -1; di <= 1 && ok; ++di) ok = have(i + di, j + dj);
      if (!ok) continue;

      auto at = [&](const std::vector<double>& q, int di, int dj) {
        return q[spec.idx(i + di, j + dj)];
      };
      auto dxq = [&](const std::vector<double>& q) {
        return (at(q, 1, 0) - at(q, -1, 0)) / (2 * hx);
      };
      auto dtq = [&](const std::vector<double>& q) {
        return (at(q, 0, 1) - at(q, 0, -1)) / (2 * ht);
      };
      auto dxxq = [&](const std::vector<double>& q) {
        return (at(q, 1, 0) - 2 * at(q, 0, 0) + at(q, -1, 0)) / (hx * hx);
      };
      auto dttq = [&](const std::vector<double>& q) {
        return (at(q, 0, 1) - 2 * at(q, 0, 0) + at(q, 0, -1)) / (ht * ht);
      };
      auto dxtq = [&](const std::vector<double>& q) {
        return (at(q, 1, 1) - at(q, 1, -1) - at(q, -1, 1) + at(q, -1, -1)) /
               (4 * hx * ht);
      };

      std::size_t n = spec.idx(i, j);
      double e = E[n], f = F[n], g = G[n];
      double det1 = e * g - f * f;
      if (std::abs(det1) < 1e-14)
        throw DegeneracyError("degenerate metric cell in the curvature audit");

      Eigen::Matrix3d m1, m2;
      m1 << -0.5 * dttq(E) + dxtq(F) - 0.5 * dxxq(G), 0.5 * dxq(E),
          dxq(F) - 0.5 * dtq(E),  //
          dtq(F) - 0.5 * dxq(G), e, f,  //
          0.5 * dtq(G), f, g;
      m2 << 0, 0.5 * dtq(E), 0.5 * dxq(G),  //
          0.5 * dtq(E), e, f,               //
          0.5 * dxq(G), f, g;
      double kk = (m1.determinant() - m2.determinant()) / (det1 * det1);
      stats.k[n] = kk;
      ++stats.audited;
      sum += kk;
      stats.min_k = std::min(stats.min_k, kk);
      stats.max_k = std::max(stats.max_k, kk);
      stats.max_abs_k_plus_1 =
          std::max(stats.max_abs_k_plus_1, std::abs(kk + 1));
    }
  }

  if (stats.audited == 0) throw Error("no nodes available for the curvature audit");
  stats.mean_k = sum / stats.audited;

  stats.histogram.assign(10, 0);
  stats.hist_lo = stats.min_k;
  stats.hist_hi = stats.max_k;
  double width = stats.hist_hi - stats.hist_lo;
  for (double kk : stats.k) {
    if (!std::isfinite(kk)) continue;
    int bin = width <= 0 ? 0
                         : std::min(9, static_cast<int>(
                                           (kk - stats.hist_lo) / width * 10));
    ++stats.histogram[bin];
  }
  return stats;
}

CurvatureStats curvature_check(const ImmersedSurface& surf) {
  return brioschi_curvature(surf.spec, surf.position, surf.mask);
}

}  // namespace pss
