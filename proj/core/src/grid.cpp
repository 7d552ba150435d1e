#include "pss/grid.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "pss/errors.hpp"

namespace pss {

Env SolutionGrid::env_at(int i, int j) const {
  Env env;
  env.x = spec.x_at(i);
  env.t = spec.t_at(j);
  std::size_t n = spec.idx(i, j);
  env.z.resize(jet_order + 1);
  for (int o = 0; o <= jet_order; ++o) env.z[o] = z[o][n];
  if (!w1.empty()) {
    env.w.resize(w2.empty() ? 2 : 3);
    env.w[1] = w1[n];
    if (!w2.empty()) env.w[2] = w2[n];
  }
  return env;
}

SolutionGrid sample_soliton(double alpha, const GridSpec& spec) {
  if (alpha == 0) throw SolverError("soliton parameter alpha must be nonzero");
  SolutionGrid g;
  g.spec = spec;
  g.scheme = Scheme::Hyperbolic;
  g.provenance = Provenance::ClosedForm;
  g.jet_order = 4;
  g.z.assign(5, std::vector<double>(spec.size()));
  g.w1.assign(spec.size(), 0);
  g.w2.assign(spec.size(), 0);

  double residual = 0;
  for (int j = 0; j < spec.nt; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      double theta = alpha * spec.x_at(i) + spec.t_at(j) / alpha;
      double s = 1.0 / std::cosh(theta);
      double tau = std::tanh(theta);
      std::size_t n = spec.idx(i, j);
      double u = 4.0 * std::atan(std::exp(theta));
      g.z[0][n] = u;
      g.z[1][n] = 2 * alpha * s;
      g.z[2][n] = -2 * alpha * alpha * s * tau;
      g.z[3][n] = 2 * alpha * alpha * alpha * s * (1 - 2 * s * s);
      g.z[4][n] =
          -2 * alpha * alpha * alpha * alpha * s * tau * (1 - 6 * s * s);
      g.w1[n] = 2 * s / alpha;
      g.w2[n] = -2 * s * tau / (alpha * alpha);
      double uxt = -2 * s * tau;
      residual = std::max(residual, std::abs(uxt - std::sin(u)));
    }
  }
  g.residual_max = residual;
  return g;
}

SolutionGrid sample_constant(double value, const GridSpec& spec,
                             const EquationDef& eq,
                             const std::map<std::string, double>& params,
                             double tol) {
  int k = eq.scheme() == Scheme::Evolution ? eq.order() : 1;
  Env env;
  env.x = spec.x0;
  env.t = spec.t0;
  env.z.assign(k + 1, 0.0);
  env.z[0] = value;
  env.w.assign(2, 0.0);
  for (const auto& [n, v] : params) env.params[n] = v;
  double f = eq.rhs().eval(env);

  SolutionGrid g;
  g.spec = spec;
  g.scheme = eq.scheme();
  g.provenance = Provenance::ClosedForm;
  g.jet_order = k;
  g.z.assign(k + 1, std::vector<double>(spec.size(), 0.0));
  std::fill(g.z[0].begin(), g.z[0].end(), value);
  if (eq.scheme() == Scheme::Hyperbolic) {
    g.w1.assign(spec.size(), 0.0);
    g.w2.assign(spec.size(), 0.0);
  }
  g.residual_max = std::abs(f);
  if (g.residual_max > tol)
    throw SolverError("u == " + std::to_string(value) +
                      " is not a solution: residual " +
                      std::to_string(g.residual_max));
  return g;
}

namespace {

}  // namespace

namespace {

/// Naive-DFT helper for the periodic demo grids (they are small). Supplies
/// spectral derivatives for the stored jets and the 2/3-rule low-pass that
/// keeps the ill-posed top third of the spectrum from swamping the solve.
struct PeriodicSpectral {
  int m;
  double span;

  std::vector<std::complex<double>> forward(const Eigen::VectorXd& u) const {
    using Cplx = std::complex<double>;
    std::vector<Cplx> hat(m);
    for (int k = 0; k < m; ++k) {
      Cplx sum = 0;
      for (int j = 0; j < m; ++j)
        sum += u[j] * std::exp(Cplx(0, -2.0 * M_PI * k * j / m));
      hat[k] = sum / double(m);
    }
    return hat;
  }

  Eigen::VectorXd inverse(const std::vector<std::complex<double>>& hat) const {
    using Cplx = std::complex<double>;
    Eigen::VectorXd out(m);
    for (int j = 0; j < m; ++j) {
      Cplx val = 0;
      for (int k = 0; k < m; ++k)
        val += hat[k] * std::exp(Cplx(0, 2.0 * M_PI * k * j / m));
      out[j] = val.real();
    }
    return out;
  }

  int wave(int k) const { return k <= m / 2 ? k : k - m; }

  Eigen::VectorXd filtered(const Eigen::VectorXd& u) const {
    auto hat = forward(u);
    for (int k = 0; k < m; ++k)
      if (std::abs(wave(k)) > m / 3) hat[k] = 0;
    return inverse(hat);
  }

  Eigen::VectorXd derivative(const Eigen::VectorXd& u, int order) const {
    using Cplx = std::complex<double>;
    auto hat = forward(u);
    for (int k = 0; k < m; ++k) {
      if (order % 2 == 1 && m % 2 == 0 && k == m / 2) {
        hat[k] = 0;  // Nyquist
        continue;
      }
      hat[k] *= std::pow(Cplx(0, 2.0 * M_PI * wave(k) / span), order);
    }
    return inverse(hat);
  }
};

}  // namespace

SolutionGrid solve_evolution_mol(const EquationDef& eq,
                                 const std::map<std::string, double>& params,
                                 const GridSpec& spec, const MolOptions& opt) {
  if (eq.scheme() != Scheme::Evolution)
    throw SchemeError("the method-of-lines solver handles evolution equations");
  const int k = eq.order();
  const int m = spec.nx - 1;  // unique periodic nodes; node nx-1 == node 0
  if (m < 2 * k + 1) throw SolverError("grid too coarse for the stencil");
  const double span = spec.x1 - spec.x0;
  PeriodicSpectral spectral{m, span};

  // linear constant-coefficient part of F, frozen at the zero state
  Env zero_env;
  zero_env.z.assign(k + 1, 0.0);
  for (const auto& [n, v] : params) zero_env.params[n] = v;
  std::vector<double> lin(k + 1, 0.0);
  for (int i = 0; i <= k; ++i)
    lin[i] = eq.rhs().partial(Var::z(i)).eval(zero_env);

  // the linear step is diagonal in Fourier space: amplification through the
  // L-stable (0,2) Pade approximant 1/(1 - x + x^2/2) of e^x (complex poles,
  // so the backward-parabolic modes cannot resonate the way implicit Euler
  // does at dt*s = 1)
  const double dt = spec.dt() / opt.substeps;
  using Cplx = std::complex<double>;
  std::vector<Cplx> gain(m);
  for (int kk = 0; kk < m; ++kk) {
    Cplx ik(0, 2.0 * M_PI * spectral.wave(kk) / span);
    Cplx sigma = 0;
    for (int i = 0; i <= k; ++i)
      if (lin[i] != 0) sigma += lin[i] * std::pow(ik, i);
    Cplx x = dt * sigma;
    gain[kk] = 1.0 / (1.0 - x + 0.5 * x * x);
    if (std::abs(spectral.wave(kk)) > m / 3) gain[kk] = 0;  // 2/3-rule filter
  }

  Eigen::VectorXd u(m);
  for (int i = 0; i < m; ++i)
    u[i] = opt.offset + opt.amplitude *
           std::sin(2 * M_PI * (spec.x_at(i) - spec.x0) / span);

  SolutionGrid g;
  g.spec = spec;
  g.scheme = Scheme::Evolution;
  g.provenance = Provenance::FiniteDifference;
  g.jet_order = k;
  g.z.assign(k + 1, std::vector<double>(spec.size()));

  auto nonlinear = [&](const Eigen::VectorXd& state) {
    std::vector<Eigen::VectorXd> jets(k + 1);
    jets[0] = state;
    for (int i = 1; i <= k; ++i) jets[i] = spectral.derivative(state, i);
    Eigen::VectorXd out(m);
    Env env = zero_env;
    for (int node = 0; node < m; ++node) {
      double linear = 0;
      for (int i = 0; i <= k; ++i) {
        env.z[i] = jets[i][node];
        linear += lin[i] * jets[i][node];
      }
      out[node] = eq.rhs().eval(env) - linear;
    }
    return out;
  };

  auto store_slice = [&](int j, const Eigen::VectorXd& state) {
    for (int order = 0; order <= k; ++order) {
      Eigen::VectorXd d =
          order == 0 ? state : spectral.derivative(state, order);
      for (int node = 0; node < m; ++node)
        g.z[order][spec.idx(node, j)] = d[node];
      g.z[order][spec.idx(spec.nx - 1, j)] = d[0];
    }
  };

  store_slice(0, u);
  for (int j = 1; j < spec.nt; ++j) {
    for (int s = 0; s < opt.substeps; ++s) {
      auto hat = spectral.forward(u + dt * nonlinear(u));
      for (int kk = 0; kk < m; ++kk) hat[kk] *= gain[kk];
      u = spectral.inverse(hat);
      if (!u.allFinite() || u.cwiseAbs().maxCoeff() > opt.blowup_cap)
        throw SolverError("method-of-lines solve blew up at t = " +
                          std::to_string(spec.t_at(j - 1) + (s + 1) * dt));
    }
    store_slice(j, u);
  }

  // residual audit with time-centered differences on the output slices
  double residual = 0;
  Env env = zero_env;
  for (int j = 1; j + 1 < spec.nt; ++j) {
    for (int i = 0; i < spec.nx; ++i) {
      for (int o = 0; o <= k; ++o) env.z[o] = g.z[o][spec.idx(i, j)];
      double ut = (g.z[0][spec.idx(i, j + 1)] - g.z[0][spec.idx(i, j - 1)]) /
                  (2 * spec.dt());
      residual = std::max(residual, std::abs(ut - eq.rhs().eval(env)));
    }
  }
  g.residual_max = residual;
  if (residual > opt.residual_tol)
    throw SolverError("method-of-lines residual " + std::to_string(residual) +
                      " exceeds tolerance");
  return g;
}

}  // namespace pss
