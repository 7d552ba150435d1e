#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pss/equation.hpp"

namespace pss {

struct GridSpec {
  double x0 = 0, x1 = 1, t0 = 0, t1 = 1;
  int nx = 2, nt = 2;

  double dx() const { return nx > 1 ? (x1 - x0) / (nx - 1) : 0; }
  double dt() const { return nt > 1 ? (t1 - t0) / (nt - 1) : 0; }
  double x_at(int i) const { return x0 + i * dx(); }
  double t_at(int j) const { return t0 + j * dt(); }
  std::size_t size() const {
    return static_cast<std::size_t>(nx) * static_cast<std::size_t>(nt);
  }
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(j) * nx + i;
  }
  /// Doubled-resolution grid with the same extent (for half-step sampling).
  GridSpec refined() const { return {x0, x1, t0, t1, 2 * nx - 1, 2 * nt - 1}; }
};

enum class Provenance : std::uint8_t { ClosedForm, FiniteDifference };

/// Samples of a concrete solution u over a rectangle, together with the jet
/// values the 1-forms need. Row-major arrays indexed via spec.idx(i, j).
struct SolutionGrid {
  GridSpec spec;
  Scheme scheme = Scheme::Hyperbolic;
  Provenance provenance = Provenance::ClosedForm;
  int jet_order = 0;                    ///< highest z_i sampled
  std::vector<std::vector<double>> z;   ///< z[i], i = 0..jet_order
  std::vector<double> w1, w2;           ///< hyperbolic extras (may be empty)
  double residual_max = 0;              ///< PDE residual audit

  Env env_at(int i, int j) const;
  bool has_w() const { return !w1.empty(); }
};

/// One-soliton solution u = 4 arctan(exp(alpha x + t/alpha)) of
/// u_xt = sin u, with analytic jets up to z4 (and w1, w2). The residual
/// audit compares u_xt against sin u at every node.
SolutionGrid sample_soliton(double alpha, const GridSpec& spec);

/// Constant solution u == value; valid only when F vanishes on it, which the
/// residual audit enforces (tolerance `tol`).
SolutionGrid sample_constant(double value, const GridSpec& spec,
                             const EquationDef& eq,
                             const std::map<std::string, double>& params = {},
                             double tol = 1e-9);

struct MolOptions {
  double amplitude = 0.05;   ///< initial profile amplitude (one sine mode)
  double offset = 0.0;       ///< constant component of the initial profile
  int substeps = 8;          ///< solver steps per output time slice
  double blowup_cap = 1e6;   ///< abort threshold on max |u|
  double residual_tol = 1e9; ///< audit gate; default effectively off
};

/// Method-of-lines solve of an evolution equation on a periodic x-interval.
/// The linear constant-coefficient part steps through the L-stable (0,2)
/// Pade approximant of the exponential (complex poles, so backward-parabolic
/// modes cannot resonate), the rest explicitly. Jets come from periodic
/// central differences. Demonstration quality: small amplitudes, short
/// horizons.
SolutionGrid solve_evolution_mol(const EquationDef& eq,
                                 const std::map<std::string, double>& params,
                                 const GridSpec& spec,
                                 const MolOptions& opt = {});

}  // namespace pss
