#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "pss/catalog.hpp"
#include "pss/curvature.hpp"
#include "pss/errors.hpp"
#include "pss/frame.hpp"
#include "pss/grid.hpp"
#include "pss/mesh_io.hpp"

using namespace pss;

namespace {

constexpr double kPi = 3.14159265358979323846;

GridSpec strip(int n) { return GridSpec{0.15, 1.35, 0.15, 1.35, n, n}; }

ProblemDef load(const char* name) {
  return parse_problem(*catalog_source(name));
}

ImmersedSurface soliton_surface(int coarse_n, double perturb_a = 0) {
  ProblemDef p = load("sine-gordon-8");
  GridSpec fine = strip(coarse_n).refined();
  SolutionGrid sol = sample_soliton(1.0, fine);
  FrameField ff = evaluate_forms(p, sol);
  REQUIRE(ff.masked_count == 0);
  SffValues sff = SffValues::from(ff);
  if (perturb_a != 0)
    for (double& v : sff.a) v *= 1.0 + perturb_a;
  return integrate_frame(ff, sff, SeedPose::identity());
}

}  // namespace

TEST_CASE("soliton closed form: value and residual audit") {
  GridSpec spec{-3, 3, -3, 3, 101, 101};
  SolutionGrid g = sample_soliton(1.0, spec);
  // u(0,0) = 4 arctan(1) = pi
  CHECK(g.z[0][spec.idx(50, 50)] == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(g.residual_max < 1e-10);
  CHECK(g.jet_order == 4);
  CHECK(g.has_w());
}

TEST_CASE("soliton jets agree with finite differences of u") {
  GridSpec spec{-1, 1, -1, 1, 201, 201};
  SolutionGrid g = sample_soliton(1.0, spec);
  double h = spec.dx();
  double worst1 = 0, worst2 = 0;
  for (int j = 0; j < spec.nt; j += 20) {
    for (int i = 2; i + 2 < spec.nx; i += 7) {
      double fd1 = (g.z[0][spec.idx(i + 1, j)] - g.z[0][spec.idx(i - 1, j)]) /
                   (2 * h);
      double fd2 = (g.z[0][spec.idx(i + 1, j)] - 2 * g.z[0][spec.idx(i, j)] +
                    g.z[0][spec.idx(i - 1, j)]) /
                   (h * h);
      worst1 = std::max(worst1, std::abs(fd1 - g.z[1][spec.idx(i, j)]));
      worst2 = std::max(worst2, std::abs(fd2 - g.z[2][spec.idx(i, j)]));
    }
  }
  CHECK(worst1 < 5e-4);  // O(h^2), h = 0.01
  CHECK(worst2 < 5e-4);
}

TEST_CASE("constant solutions validate their residual") {
  ProblemDef sg = load("sine-gordon-8");
  GridSpec spec{0, 1, 0, 1, 5, 5};
  SolutionGrid g = sample_constant(0.0, spec, sg.equation);
  CHECK(g.residual_max == 0.0);
  CHECK_THROWS_AS(sample_constant(1.0, spec, sg.equation), SolverError);

  ProblemDef f45 = load("fourth-order-45");
  std::map<std::string, double> params{
      {"m0", 0.25}, {"m1", 0.0}, {"m2", 0.0}, {"gamma", 0.1}, {"l", 4.0}};
  SolutionGrid z = sample_constant(0.0, spec, f45.equation, params);
  CHECK(z.residual_max == 0.0);
}

TEST_CASE("evaluate_forms reproduces the wedge and masks degeneracies") {
  ProblemDef p = load("sine-gordon-8");
  GridSpec spec = strip(21);
  SolutionGrid sol = sample_soliton(1.0, spec);
  FrameField ff = evaluate_forms(p, sol);
  CHECK(ff.masked_count == 0);
  for (int j = 0; j < spec.nt; j += 5) {
    for (int i = 0; i < spec.nx; i += 5) {
      std::size_t n = spec.idx(i, j);
      double wedge = ff.f[0][n] * ff.f[3][n] - ff.f[2][n] * ff.f[1][n];
      CHECK(wedge == doctest::Approx(-std::sin(sol.z[0][n])).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant zero solution makes the half-angle forms fully degenerate") {
  ProblemDef p = load("sine-gordon-8");
  GridSpec spec{0, 1, 0, 1, 7, 7};
  SolutionGrid sol = sample_constant(0.0, spec, p.equation);
  FrameField ff = evaluate_forms(p, sol);
  CHECK(ff.fully_degenerate());
}

TEST_CASE("spectral forms mask exactly the u = pi contour") {
  ProblemDef p = load("sine-gordon-7");
  GridSpec spec{-3, 3, -3, 3, 101, 101};
  SolutionGrid sol = sample_soliton(1.0, spec);
  FrameField ff = evaluate_forms(p, sol, {{"eta", 1.0}});
  int on_diagonal = 0;
  for (int j = 0; j < spec.nt; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      bool masked = ff.mask[spec.idx(i, j)] != 0;
      if (i + j == 100) {
        CHECK(masked);  // theta = x + t = 0 -> u = pi exactly
        ++on_diagonal;
      } else {
        CHECK(!masked);
      }
    }
  }
  CHECK(on_diagonal == 101);
  CHECK(ff.masked_count == 101);
  auto rect = ff.largest_clear_rect();
  CHECK(rect.area() == 51 * 50);  // the maximal rectangle under the diagonal
  for (int j = rect.j0; j <= rect.j1; ++j)
    for (int i = rect.i0; i <= rect.i1; ++i)
      CHECK(!ff.mask[spec.idx(i, j)]);
}

TEST_CASE("a 1x1 grid returns the seed pose") {
  ProblemDef p = load("sine-gordon-8");
  GridSpec spec{0.5, 0.5, 0.5, 0.5, 1, 1};
  SolutionGrid sol = sample_soliton(1.0, spec);
  FrameField ff = evaluate_forms(p, sol);
  SeedPose seed;
  seed.position = Eigen::Vector3d(1, 2, 3);
  ImmersedSurface surf = integrate_frame(ff, SffValues::from(ff), seed);
  CHECK(surf.position[0] == seed.position);
  CHECK(surf.frame[0] == seed.frame);
}

TEST_CASE("integration rejects even-dimension fields and bad seeds") {
  ProblemDef p = load("sine-gordon-8");
  SolutionGrid sol = sample_soliton(1.0, strip(10));
  FrameField ff = evaluate_forms(p, sol);
  CHECK_THROWS_AS(integrate_frame(ff, SffValues::from(ff), SeedPose{}), Error);
  SolutionGrid ok = sample_soliton(1.0, strip(11));
  FrameField ff2 = evaluate_forms(p, ok);
  SeedPose tilted;
  tilted.frame(0, 1) = 0.5;
  CHECK_THROWS_AS(integrate_frame(ff2, SffValues::from(ff2), tilted), Error);
}

TEST_CASE("integration crossing the mask reports the clear sub-rectangle") {
  ProblemDef p = load("sine-gordon-7");
  GridSpec spec{-2, 2, -2, 2, 41, 41};
  SolutionGrid sol = sample_soliton(1.0, spec);
  FrameField ff = evaluate_forms(p, sol, {{"eta", 1.0}});
  REQUIRE(ff.masked_count > 0);
  // tan/cot sff for the path test; forms (7) pair with the same equation
  SffValues sff;
  sff.a.assign(spec.size(), 0.0);
  sff.b.assign(spec.size(), 1.0);
  sff.c.assign(spec.size(), 0.0);
  try {
    integrate_frame(ff, sff, SeedPose::identity());
    FAIL("expected DegeneracyError");
  } catch (const DegeneracyError& e) {
    CHECK(std::string(e.what()).find("sub-rectangle") != std::string::npos);
  }
}

TEST_CASE("orthonormal frames with unit determinant") {
  ImmersedSurface surf = soliton_surface(25);
  CHECK(surf.max_orthonormality_dev < 1e-8);
  for (std::size_t n = 0; n < surf.frame.size(); n += 17) {
    CHECK(surf.frame[n].determinant() == doctest::Approx(1.0).epsilon(1e-8));
    Eigen::Vector3d nvec = surf.frame[n].col(0).cross(surf.frame[n].col(1));
    CHECK((nvec - surf.frame[n].col(2)).norm() < 1e-12);
  }
}

TEST_CASE("compatibility residual converges at order >= 1.8") {
  double c13 = soliton_surface(13).max_compat;
  double c25 = soliton_surface(25).max_compat;
  CAPTURE(c13);
  CAPTURE(c25);
  CHECK(c25 < c13);
  double order = std::log2(c13 / c25);
  CHECK(order >= 1.8);
}

TEST_CASE("corrupting the sff raises the compatibility residual 10x") {
  double clean = soliton_surface(51).max_compat;
  double corrupted = soliton_surface(51, 0.01).max_compat;
  CAPTURE(clean);
  CAPTURE(corrupted);
  CHECK(corrupted >= 10 * clean);
}

TEST_CASE("seed-pose equivariance under rigid motions") {
  ImmersedSurface base = soliton_surface(13);
  Eigen::Matrix3d rot =
      Eigen::AngleAxisd(0.7, Eigen::Vector3d(1, 2, 2).normalized())
          .toRotationMatrix();
  Eigen::Vector3d shift(0.3, -1.2, 2.5);

  ProblemDef p = load("sine-gordon-8");
  SolutionGrid sol = sample_soliton(1.0, strip(13).refined());
  FrameField ff = evaluate_forms(p, sol);
  SeedPose seed;
  seed.position = shift;
  seed.frame = rot;
  ImmersedSurface moved = integrate_frame(ff, SffValues::from(ff), seed);
  double worst = 0;
  for (std::size_t n = 0; n < base.position.size(); ++n) {
    Eigen::Vector3d expect = rot * base.position[n] + shift;
    worst = std::max(worst, (moved.position[n] - expect).norm());
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("metric fidelity: first fundamental form matches the forms") {
  ProblemDef p = load("sine-gordon-8");
  int n = 51;
  ImmersedSurface surf = soliton_surface(n);
  SolutionGrid sol = sample_soliton(1.0, strip(n));
  FrameField ff = evaluate_forms(p, sol);
  double hx = surf.spec.dx(), ht = surf.spec.dt();
  double worst = 0;
  for (int j = 1; j + 1 < n; j += 3) {
    for (int i = 1; i + 1 < n; i += 3) {
      auto X = [&](int ii, int jj) { return surf.position[surf.spec.idx(ii, jj)]; };
      Eigen::Vector3d xu = (X(i + 1, j) - X(i - 1, j)) / (2 * hx);
      Eigen::Vector3d xt = (X(i, j + 1) - X(i, j - 1)) / (2 * ht);
      std::size_t m = sol.spec.idx(i, j);
      double e_exact = ff.f[0][m] * ff.f[0][m] + ff.f[2][m] * ff.f[2][m];
      double f_exact = ff.f[0][m] * ff.f[1][m] + ff.f[2][m] * ff.f[3][m];
      double g_exact = ff.f[1][m] * ff.f[1][m] + ff.f[3][m] * ff.f[3][m];
      worst = std::max(worst, std::abs(xu.dot(xu) - e_exact));
      worst = std::max(worst, std::abs(xu.dot(xt) - f_exact));
      worst = std::max(worst, std::abs(xt.dot(xt) - g_exact));
    }
  }
  CHECK(worst < 5e-3);  // O(h^2) at h = 0.024
}

TEST_CASE("curvature oracle: planar grid has K = 0") {
  GridSpec spec{0, 1, 0, 2, 21, 21};
  std::vector<Eigen::Vector3d> pos(spec.size());
  for (int j = 0; j < spec.nt; ++j)
    for (int i = 0; i < spec.nx; ++i)
      pos[spec.idx(i, j)] =
          Eigen::Vector3d(spec.x_at(i), spec.t_at(j), 0.0);
  CurvatureStats stats = brioschi_curvature(spec, pos);
  CHECK(std::abs(stats.mean_k) < 1e-9);
  CHECK(std::abs(stats.max_k) < 1e-9);
  CHECK(std::abs(stats.min_k) < 1e-9);
}

TEST_CASE("curvature oracle: unit sphere patch has K = +1") {
  GridSpec spec{0.6, 1.2, 0.0, 0.6, 201, 201};
  std::vector<Eigen::Vector3d> pos(spec.size());
  for (int j = 0; j < spec.nt; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      double th = spec.x_at(i), ph = spec.t_at(j);
      pos[spec.idx(i, j)] = Eigen::Vector3d(
          std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
          std::cos(th));
    }
  }
  CurvatureStats stats = brioschi_curvature(spec, pos);
  CHECK(std::abs(stats.mean_k - 1.0) < 1e-3);
  CHECK(std::abs(stats.max_k - 1.0) < 1e-3);
  CHECK(std::abs(stats.min_k - 1.0) < 1e-3);
}

TEST_CASE("soliton surface is pseudo-spherical to the audit tolerance") {
  ImmersedSurface surf = soliton_surface(101);
  CurvatureStats stats = curvature_check(surf);
  CAPTURE(stats.max_abs_k_plus_1);
  CHECK(stats.max_abs_k_plus_1 < 5e-3);  // acceptance checks 1e-3 at 201^2
  CHECK(stats.mean_k == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("flat metric data with a ruled sff is flagged by the audit") {
  // structure equations do NOT hold for these inputs; the reconstruction
  // produces a ruled surface whose curvature is far from -1
  GridSpec fine{0, 1.5, 0, 1.5, 41, 41};
  FrameField ff;
  ff.spec = fine;
  for (auto& arr : ff.f) arr.assign(fine.size(), 0.0);
  std::fill(ff.f[0].begin(), ff.f[0].end(), 1.0);  // f11 = 1
  std::fill(ff.f[3].begin(), ff.f[3].end(), 1.0);  // f22 = 1
  ff.a.assign(fine.size(), 0.0);
  ff.b.assign(fine.size(), 1.0);
  ff.c.assign(fine.size(), 0.0);
  ff.mask.assign(fine.size(), 0);
  ImmersedSurface surf = integrate_frame(ff, SffValues::from(ff), SeedPose{});
  CurvatureStats stats = curvature_check(surf);
  CHECK(stats.max_abs_k_plus_1 > 0.3);  // expected failure, flagged
}

TEST_CASE("mesh export and re-import round-trips bit-exactly") {
  ImmersedSurface surf = soliton_surface(11);
  auto path = std::filesystem::temp_directory_path() / "pss_mesh_test.obj";
  export_mesh(surf, path);
  MeshData mesh = import_mesh(path);
  CHECK(mesh.vertices.size() == 121);
  CHECK(mesh.quads.size() == 100);
  for (std::size_t n = 0; n < surf.position.size(); ++n) {
    CHECK(mesh.vertices[n].x() == surf.position[n].x());
    CHECK(mesh.vertices[n].y() == surf.position[n].y());
    CHECK(mesh.vertices[n].z() == surf.position[n].z());
  }
  std::filesystem::remove(path);
}

TEST_CASE("masked nodes are omitted and faces drop accordingly") {
  ImmersedSurface surf = soliton_surface(11);
  surf.mask[surf.spec.idx(5, 5)] = 1;  // interior node
  auto path = std::filesystem::temp_directory_path() / "pss_mesh_mask.obj";
  export_mesh(surf, path);
  MeshData mesh = import_mesh(path);
  CHECK(mesh.vertices.size() == 120);
  CHECK(mesh.quads.size() == 96);  // the 4 quads touching the node vanish
  std::filesystem::remove(path);
}

TEST_CASE("audit csv lists every unmasked node") {
  ImmersedSurface surf = soliton_surface(11);
  CurvatureStats stats = curvature_check(surf);
  auto path = std::filesystem::temp_directory_path() / "pss_audit_test.csv";
  write_audit_csv(surf, &stats, path);
  std::ifstream in(path);
  std::string line;
  int rows = 0;
  std::getline(in, line);
  CHECK(line == "i,j,x,t,px,py,pz,compat,K");
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 121);
  std::filesystem::remove(path);
}

TEST_CASE("method of lines: zero data stays zero") {
  ProblemDef p = load("fourth-order-45");
  GridSpec spec{0, 1, 0, 0.1, 33, 5};
  MolOptions opt;
  opt.amplitude = 0.0;
  std::map<std::string, double> params{
      {"m0", 0.0}, {"m1", 0.0}, {"m2", 0.0}};
  SolutionGrid g = solve_evolution_mol(p.equation, params, spec, opt);
  for (double v : g.z[0]) CHECK(v == 0.0);
  CHECK(g.residual_max == 0.0);
}

TEST_CASE("method of lines: small-amplitude demo run stays bounded") {
  ProblemDef p = load("fourth-order-45");
  GridSpec spec{0, 6.28318530717958648, 0, 0.01, 17, 5};
  MolOptions opt;
  opt.amplitude = 0.01;
  opt.substeps = 8;
  std::map<std::string, double> params{
      {"m0", 0.25}, {"m1", 0.0}, {"m2", 0.0}};
  SolutionGrid g = solve_evolution_mol(p.equation, params, spec, opt);
  CHECK(g.provenance == Provenance::FiniteDifference);
  CHECK(std::isfinite(g.residual_max));
  double umax = 0;
  for (double v : g.z[0]) umax = std::max(umax, std::abs(v));
  CHECK(umax < 1.0);
}

TEST_CASE("method of lines: blow-up is detected") {
  EquationDef cubic = EquationDef::evolution(Expr::z(2) + Expr::z(0).pow(3));
  GridSpec spec{0, 6.28318, 0, 2.0, 33, 21};
  MolOptions opt;
  opt.amplitude = 5.0;
  opt.substeps = 40;
  CHECK_THROWS_AS(solve_evolution_mol(cubic, {}, spec, opt), SolverError);
}
