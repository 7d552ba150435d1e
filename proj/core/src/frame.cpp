#include "pss/frame.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

FrameField::Rect FrameField::largest_clear_rect() const {
  // maximal all-zero rectangle via the histogram-of-heights method
  Rect best;
  long best_area = 0;
  std::vector<int> height(spec.nx, 0);
  for (int j = 0; j < spec.nt; ++j) {
    for (int i = 0; i < spec.nx; ++i)
      height[i] = mask[spec.idx(i, j)] ? 0 : height[i] + 1;
    // largest rectangle in histogram (stack scan)
    std::vector<int> stack;
    for (int i = 0; i <= spec.nx; ++i) {
      int h = i < spec.nx ? height[i] : 0;
      int start = i;
      while (!stack.empty() && height[stack.back()] >= h) {
        int top = stack.back();
        stack.pop_back();
        int left = stack.empty() ? 0 : stack.back() + 1;
        long area = long(height[top]) * (i - left);
        if (area > best_area) {
          best_area = area;
          best = Rect{left, j - height[top] + 1, i - 1, j};
        }
        start = left;
      }
      (void)start;
      if (i < spec.nx) stack.push_back(i);
    }
  }
  return best;
}

std::string FrameField::mask_report() const {
  std::ostringstream os;
  os << "degenerate nodes: " << masked_count << " of " << spec.size();
  if (masked_count > 0 && !fully_degenerate()) {
    Rect r = largest_clear_rect();
    os << "; largest nondegenerate sub-rectangle: x in [" << spec.x_at(r.i0)
       << ", " << spec.x_at(r.i1) << "], t in [" << spec.t_at(r.j0) << ", "
       << spec.t_at(r.j1) << "] (" << r.width() << "x" << r.height()
       << " nodes)";
  }
  return os.str();
}

FrameField FrameField::crop(const Rect& r) const {
  if (r.i0 < 0 || r.j0 < 0 || r.i1 >= spec.nx || r.j1 >= spec.nt ||
      r.area() == 0)
    throw Error("invalid crop rectangle");
  FrameField out;
  out.spec = GridSpec{spec.x_at(r.i0), spec.x_at(r.i1), spec.t_at(r.j0),
                      spec.t_at(r.j1), r.width(), r.height()};
  auto copy = [&](const std::vector<double>& src, std::vector<double>& dst) {
    if (src.empty()) return;
    dst.resize(out.spec.size());
    for (int j = 0; j < r.height(); ++j)
      for (int i = 0; i < r.width(); ++i)
        dst[out.spec.idx(i, j)] = src[spec.idx(r.i0 + i, r.j0 + j)];
  };
  for (int k = 0; k < 6; ++k) copy(f[k], out.f[k]);
  copy(a, out.a);
  copy(b, out.b);
  copy(c, out.c);
  out.mask.resize(out.spec.size());
  out.masked_count = 0;
  for (int j = 0; j < r.height(); ++j)
    for (int i = 0; i < r.width(); ++i) {
      out.mask[out.spec.idx(i, j)] = mask[spec.idx(r.i0 + i, r.j0 + j)];
      out.masked_count += out.mask[out.spec.idx(i, j)];
    }
  out.threshold = threshold;
  return out;
}

FrameField evaluate_forms(const ProblemDef& problem, const SolutionGrid& sol,
                          const std::map<std::string, double>& params) {
  const Expr* coeffs[6] = {&problem.forms.f11, &problem.forms.f12,
                           &problem.forms.f21, &problem.forms.f22,
                           &problem.forms.f31, &problem.forms.f32};

  // every symbol must be available on the grid
  VarSet used;
  for (const Expr* e : coeffs) used.merge(e->vars());
  if (problem.sff) {
    used.merge(problem.sff->a.vars());
    used.merge(problem.sff->b.vars());
    used.merge(problem.sff->c.vars());
  }
  if (used.max_z() > sol.jet_order)
    throw Error("z" + std::to_string(used.max_z()) +
                " is not sampled on the grid");
  if (!used.w.empty() && !sol.has_w())
    throw Error("w values are not sampled on the grid");
  for (const auto& name : used.params)
    if (!params.count(name))
      throw Error("parameter '" + name + "' has no numeric value");

  FrameField ff;
  ff.spec = sol.spec;
  for (auto& arr : ff.f) arr.resize(sol.spec.size());
  ff.mask.assign(sol.spec.size(), 0);

  double scale = 0;
  for (int j = 0; j < sol.spec.nt; ++j) {
    for (int i = 0; i < sol.spec.nx; ++i) {
      Env env = sol.env_at(i, j);
      for (const auto& [n, v] : params) env.params[n] = v;
      std::size_t n = sol.spec.idx(i, j);
      for (int ci = 0; ci < 6; ++ci) ff.f[ci][n] = coeffs[ci]->eval(env);
      scale = std::max(scale, std::abs(ff.f[0][n] * ff.f[3][n]) +
                                  std::abs(ff.f[2][n] * ff.f[1][n]));
    }
  }

  ff.threshold = 1e-6 * scale;
  for (std::size_t n = 0; n < sol.spec.size(); ++n) {
    double wedge = ff.f[0][n] * ff.f[3][n] - ff.f[2][n] * ff.f[1][n];
    if (std::abs(wedge) <= ff.threshold) {
      ff.mask[n] = 1;
      ++ff.masked_count;
    }
  }

  // the sff may be singular on the degenerate set (cot(u/2) at u in pi Z);
  // masked nodes never feed the integrator, so evaluate it off-mask only
  if (problem.sff) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    ff.a.assign(sol.spec.size(), nan);
    ff.b.assign(sol.spec.size(), nan);
    ff.c.assign(sol.spec.size(), nan);
    for (int j = 0; j < sol.spec.nt; ++j) {
      for (int i = 0; i < sol.spec.nx; ++i) {
        std::size_t n = sol.spec.idx(i, j);
        if (ff.mask[n]) continue;
        Env env = sol.env_at(i, j);
        for (const auto& [name, v] : params) env.params[name] = v;
        ff.a[n] = problem.sff->a.eval(env);
        ff.b[n] = problem.sff->b.eval(env);
        ff.c[n] = problem.sff->c.eval(env);
      }
    }
  }
  return ff;
}

namespace {

struct State {
  Eigen::Vector3d x;
  Eigen::Matrix3d m;  // columns e1, e2, N
};

State operator+(const State& a, const State& b) {
  return {a.x + b.x, a.m + b.m};
}
State operator*(double s, const State& a) { return {s * a.x, s * a.m}; }

/// Direction dir: 0 = along x (dx-components), 1 = along t (dt-components).
struct LineField {
  const FrameField& ff;
  const SffValues& sff;
  int dir;

  State derivative(std::size_t n, const State& s) const {
    double w1 = ff.f[dir == 0 ? 0 : 1][n];
    double w2 = ff.f[dir == 0 ? 2 : 3][n];
    double w3 = ff.f[dir == 0 ? 4 : 5][n];
    double a = sff.a[n], b = sff.b[n], c = sff.c[n];
    double w31 = a * w1 + b * w2;
    double w32 = b * w1 + c * w2;
    Eigen::Vector3d e1 = s.m.col(0), e2 = s.m.col(1), nrm = s.m.col(2);
    State d;
    d.x = w1 * e1 + w2 * e2;
    d.m.col(0) = w3 * e2 + w31 * nrm;
    d.m.col(1) = -w3 * e1 + w32 * nrm;
    d.m.col(2) = -w31 * e1 - w32 * e2;
    return d;
  }
};

Eigen::Matrix3d nearest_rotation(const Eigen::Matrix3d& m) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(
      m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1;
    r = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return r;
}

/// One RK4 step across two fine cells; mid = the odd node between them.
State rk4_step(const LineField& field, const State& s, std::size_t n0,
               std::size_t mid, std::size_t n1, double h) {
  State k1 = field.derivative(n0, s);
  State k2 = field.derivative(mid, s + (h / 2) * k1);
  State k3 = field.derivative(mid, s + (h / 2) * k2);
  State k4 = field.derivative(n1, s + h * k3);
  State out = s + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  out.m = nearest_rotation(out.m);
  out.m.col(2) = out.m.col(0).cross(out.m.col(1));
  return out;
}

}  // namespace

ImmersedSurface integrate_frame(const FrameField& fine, const SffValues& sff,
                                const SeedPose& seed) {
  if (fine.spec.nx % 2 == 0 || fine.spec.nt % 2 == 0)
    throw Error("frame integration needs a half-step refined grid "
                "(odd dimensions)");
  if (sff.a.size() != fine.spec.size())
    throw Error("sff samples do not match the frame field grid");
  if ((seed.frame.transpose() * seed.frame - Eigen::Matrix3d::Identity())
          .cwiseAbs()
          .maxCoeff() > 1e-8)
    throw Error("seed pose frame is not orthonormal");

  GridSpec coarse{fine.spec.x0, fine.spec.x1, fine.spec.t0, fine.spec.t1,
                  (fine.spec.nx + 1) / 2, (fine.spec.nt + 1) / 2};
  const double hx = 2 * fine.spec.dx();
  const double ht = 2 * fine.spec.dt();

  auto fidx = [&](int fi, int fj) { return fine.spec.idx(fi, fj); };
  auto require_clear = [&](int fi, int fj) {
    if (fine.mask[fidx(fi, fj)])
      throw DegeneracyError("integration path crosses the degeneracy mask at "
                            "x = " +
                            std::to_string(fine.spec.x_at(fi)) + ", t = " +
                            std::to_string(fine.spec.t_at(fj)) + "; " +
                            fine.mask_report());
  };

  LineField along_x{fine, sff, 0};
  LineField along_t{fine, sff, 1};

  State start{seed.position, seed.frame};

  // x-then-t pass: along the bottom row, then up each column
  std::vector<State> pass_a(coarse.size());
  pass_a[coarse.idx(0, 0)] = start;
  require_clear(0, 0);
  for (int i = 1; i < coarse.nx; ++i) {
    require_clear(2 * i - 1, 0);
    require_clear(2 * i, 0);
    pass_a[coarse.idx(i, 0)] =
        rk4_step(along_x, pass_a[coarse.idx(i - 1, 0)], fidx(2 * i - 2, 0),
                 fidx(2 * i - 1, 0), fidx(2 * i, 0), hx);
  }
  for (int i = 0; i < coarse.nx; ++i) {
    for (int j = 1; j < coarse.nt; ++j) {
      require_clear(2 * i, 2 * j - 1);
      require_clear(2 * i, 2 * j);
      pass_a[coarse.idx(i, j)] = rk4_step(
          along_t, pass_a[coarse.idx(i, j - 1)], fidx(2 * i, 2 * j - 2),
          fidx(2 * i, 2 * j - 1), fidx(2 * i, 2 * j), ht);
    }
  }

  // t-then-x pass for the path-order compatibility audit
  std::vector<State> pass_b(coarse.size());
  pass_b[coarse.idx(0, 0)] = start;
  for (int j = 1; j < coarse.nt; ++j) {
    require_clear(0, 2 * j - 1);
    require_clear(0, 2 * j);
    pass_b[coarse.idx(0, j)] =
        rk4_step(along_t, pass_b[coarse.idx(0, j - 1)], fidx(0, 2 * j - 2),
                 fidx(0, 2 * j - 1), fidx(0, 2 * j), ht);
  }
  for (int j = 0; j < coarse.nt; ++j) {
    for (int i = 1; i < coarse.nx; ++i) {
      require_clear(2 * i - 1, 2 * j);
      require_clear(2 * i, 2 * j);
      pass_b[coarse.idx(i, j)] = rk4_step(
          along_x, pass_b[coarse.idx(i - 1, j)], fidx(2 * i - 2, 2 * j),
          fidx(2 * i - 1, 2 * j), fidx(2 * i, 2 * j), hx);
    }
  }

  ImmersedSurface surf;
  surf.spec = coarse;
  surf.position.resize(coarse.size());
  surf.frame.resize(coarse.size());
  surf.compat.resize(coarse.size());
  surf.mask.resize(coarse.size());
  for (int j = 0; j < coarse.nt; ++j) {
    for (int i = 0; i < coarse.nx; ++i) {
      std::size_t n = coarse.idx(i, j);
      surf.position[n] = pass_a[n].x;
      surf.frame[n] = pass_a[n].m;
      surf.compat[n] = (pass_a[n].x - pass_b[n].x).norm();
      surf.mask[n] = fine.mask[fidx(2 * i, 2 * j)];
      surf.max_compat = std::max(surf.max_compat, surf.compat[n]);
      double dev = (pass_a[n].m.transpose() * pass_a[n].m -
                    Eigen::Matrix3d::Identity())
                       .cwiseAbs()
                       .maxCoeff();
      surf.max_orthonormality_dev = std::max(surf.max_orthonormality_dev, dev);
    }
  }
  return surf;
}

}  // namespace pss
