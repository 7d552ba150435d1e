#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "pss/catalog.hpp"
#include "pss/parse.hpp"
#include "pss/curvature.hpp"
#include "pss/errors.hpp"
#include "pss/frame.hpp"
#include "pss/mesh_io.hpp"
#include "pss/verify.hpp"

namespace {

using namespace pss;

constexpr int kExitChecksFailed = 1;
constexpr int kExitUsage = 2;

std::map<std::string, Rational> parse_param_flags(
    const std::vector<std::string>& raw) {
  std::map<std::string, Rational> out;
  for (const auto& item : raw) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw Error("--param expects name=value, got '" + item + "'");
    std::string name = item.substr(0, eq);
    std::string text = item.substr(eq + 1);
    Rational value;
    try {
      Expr e = parse_expr(text);
      auto r = e.as_rational();
      if (!r) throw Error("not a constant");
      value = *r;
    } catch (const std::exception&) {
      throw Error("--param " + name + ": '" + text +
                  "' is not a rational constant");
    }
    out[name] = value;
  }
  return out;
}

int cmd_verify(const std::string& problem_ref, std::uint64_t seed,
               const std::vector<std::string>& checks,
               const std::string& report_path,
               const std::vector<std::string>& param_flags) {
  ProblemDef problem =
      load_problem(problem_ref, parse_param_flags(param_flags));
  VerifyOptions vo;
  vo.seed = seed;
  vo.groups = checks;
  Report report = run_checks(problem, vo);

  std::cout << "problem: " << problem.name << " ("
            << scheme_name(problem.equation.scheme()) << ", order "
            << problem.equation.order() << ")\n";
  std::cout << report.text();
  if (!report_path.empty()) {
    std::ofstream out(report_path);
    if (!out) throw IoError("cannot write '" + report_path + "'");
    out << report.summary();
  }
  if (!report.all_passed()) {
    std::cout << "verdict: FAILED\n";
    return kExitChecksFailed;
  }
  std::cout << "verdict: all checks passed\n";
  return 0;
}

struct ImmerseArgs {
  std::string problem_ref;
  double x0 = 0.15, x1 = 1.35, t0 = 0.15, t1 = 1.35;
  int nx = 201, nt = 201;
  std::string soliton;   // "alpha=<v>"
  std::string constant;  // "u=<v>"
  bool numeric = false;
  double amplitude = 0.01;
  double offset = 0.0;
  int substeps = 20;
  std::string out_mesh;
  std::string out_audit;
  double ktol = 1e-3;
  bool no_gate = false;
  std::vector<std::string> param_flags;
};

double parse_kv(const std::string& item, const std::string& key) {
  auto eq = item.find('=');
  if (eq == std::string::npos || item.substr(0, eq) != key)
    throw Error("expected " + key + "=<value>, got '" + item + "'");
  return std::stod(item.substr(eq + 1));
}

int cmd_immerse(const ImmerseArgs& args) {
  auto overrides = parse_param_flags(args.param_flags);
  ProblemDef problem = load_problem(args.problem_ref, overrides);
  if (!problem.sff)
    throw Error("problem '" + problem.name +
                "' has no second fundamental form; nothing to immerse");

  // numeric values for every remaining free parameter (eta defaults to 1)
  std::map<std::string, double> values;
  for (const auto& [name, binding] : problem.params)
    if (!binding.free) values[name] = to_double(binding.value);
  VarSet used;
  used.merge(problem.forms.f11.vars());
  used.merge(problem.forms.f12.vars());
  used.merge(problem.forms.f21.vars());
  used.merge(problem.forms.f22.vars());
  used.merge(problem.forms.f31.vars());
  used.merge(problem.forms.f32.vars());
  used.merge(problem.sff->a.vars());
  used.merge(problem.sff->b.vars());
  used.merge(problem.sff->c.vars());
  for (const auto& name : used.params) {
    if (values.count(name)) continue;
    if (name == "eta") {
      values["eta"] = 1.0;
      continue;
    }
    throw Error("parameter '" + name +
                "' needs a value: pass --param " + name + "=<rational>");
  }

  GridSpec coarse{args.x0, args.x1, args.t0, args.t1, args.nx, args.nt};
  GridSpec fine = coarse.refined();

  SolutionGrid sol = [&] {
    if (!args.soliton.empty()) {
      if (problem.equation.scheme() != Scheme::Hyperbolic)
        throw Error("--soliton needs the hyperbolic sine-Gordon scheme");
      return sample_soliton(parse_kv(args.soliton, "alpha"), fine);
    }
    if (!args.constant.empty())
      return sample_constant(parse_kv(args.constant, "u"), fine,
                             problem.equation, values);
    if (args.numeric) {
      MolOptions mol;
      mol.amplitude = args.amplitude;
      mol.offset = args.offset;
      mol.substeps = args.substeps;
      return solve_evolution_mol(problem.equation, values, fine, mol);
    }
    throw Error("pick a solution source: --soliton, --constant or --numeric");
  }();
  std::cout << "solution residual audit: max " << sol.residual_max << "\n";

  FrameField ff = evaluate_forms(problem, sol, values);
  if (ff.masked_count > 0) {
    std::cout << ff.mask_report() << "\n";
    if (ff.fully_degenerate()) {
      std::cout << "the forms are degenerate on the whole grid\n";
      return kExitChecksFailed;
    }
    auto rect = ff.largest_clear_rect();
    // shrink to odd dimensions for the integrator
    if (rect.width() % 2 == 0) rect.i1 -= 1;
    if (rect.height() % 2 == 0) rect.j1 -= 1;
    if (rect.width() < 11 || rect.height() < 11) {
      std::cout << "nondegenerate region too small to integrate\n";
      return kExitChecksFailed;
    }
    std::cout << "integrating on the largest nondegenerate sub-rectangle\n";
    ff = ff.crop(rect);
  }

  ImmersedSurface surf =
      integrate_frame(ff, SffValues::from(ff), SeedPose::identity());
  std::cout << "max path-order compatibility residual: " << surf.max_compat
            << "\n";
  std::cout << "max frame orthonormality deviation: "
            << surf.max_orthonormality_dev << "\n";

  CurvatureStats stats = curvature_check(surf);
  std::cout << stats.str() << "\n";

  if (!args.out_mesh.empty()) {
    export_mesh(surf, args.out_mesh);
    std::cout << "mesh written to " << args.out_mesh << "\n";
  }
  if (!args.out_audit.empty()) {
    write_audit_csv(surf, &stats, args.out_audit);
    std::cout << "audit table written to " << args.out_audit << "\n";
  }

  if (!args.no_gate && stats.max_abs_k_plus_1 >= args.ktol) {
    std::cout << "curvature audit FAILED: max |K+1| = "
              << stats.max_abs_k_plus_1 << " >= " << args.ktol << "\n";
    return kExitChecksFailed;
  }
  if (args.no_gate)
    std::cout << "curvature audit informational (no gate)\n";
  else
    std::cout << "curvature audit passed: max |K+1| = "
              << stats.max_abs_k_plus_1 << " < " << args.ktol << "\n";
  return 0;
}

int cmd_catalog() {
  for (const auto& e : builtin_catalog()) {
    ProblemDef p = parse_problem(e.source);
    std::cout << e.name << "  [" << scheme_name(p.equation.scheme())
              << ", order " << p.equation.order() << "]"
              << (p.sff ? " sff" : "") << (p.spectral ? " spectral" : "")
              << (e.has_soliton ? " soliton" : "") << "  -- " << e.notes
              << "\n";
  }
  return 0;
}

int cmd_report(const std::vector<std::string>& inputs,
               const std::string& out_path) {
  // merge summaries: keep every line, sorted by check name (stable)
  std::vector<std::pair<std::string, std::string>> lines;
  for (const auto& path : inputs) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      auto tab = line.find('\t');
      lines.emplace_back(line.substr(0, tab), line);
    }
  }
  std::stable_sort(lines.begin(), lines.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw IoError("cannot write '" + out_path + "'");
    out = &file;
  }
  for (const auto& [key, line] : lines) *out << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "pss -- verify pseudo-spherical structure data and reconstruct "
      "surfaces"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand(
      "verify", "run symbolic checks for a catalog entry or problem file");
  std::string problem_ref;
  std::uint64_t seed = 0;
  std::vector<std::string> checks;
  std::string report_path;
  std::vector<std::string> params;
  verify->add_option("problem", problem_ref, "catalog name or .pssp path")
      ->required();
  verify->add_option("--seed", seed, "random seed for the numeric sampler");
  verify->add_option(
      "--checks", checks,
      "check groups: structure, lemma, gauss, codazzi, universality")
      ->delimiter(',');
  verify->add_option("--report", report_path, "write the machine summary here");
  verify->add_option("--param", params, "bind a parameter, name=rational");

  // immerse
  auto* immerse = app.add_subcommand(
      "immerse", "reconstruct the surface for a concrete solution");
  ImmerseArgs ia;
  immerse->add_option("problem", ia.problem_ref, "catalog name or .pssp path")
      ->required();
  immerse->add_option("--x0", ia.x0, "grid x start");
  immerse->add_option("--x1", ia.x1, "grid x end");
  immerse->add_option("--t0", ia.t0, "grid t start");
  immerse->add_option("--t1", ia.t1, "grid t end");
  immerse->add_option("--nx", ia.nx, "grid nodes in x");
  immerse->add_option("--nt", ia.nt, "grid nodes in t");
  immerse->add_option("--soliton", ia.soliton,
                      "one-soliton solution, alpha=<value>");
  immerse->add_option("--constant", ia.constant,
                      "constant solution, u=<value>");
  immerse->add_flag("--numeric", ia.numeric,
                    "method-of-lines solve (evolution equations, periodic)");
  immerse->add_option("--amplitude", ia.amplitude,
                      "--numeric initial profile amplitude");
  immerse->add_option("--offset", ia.offset,
                      "--numeric constant component of the initial profile");
  immerse->add_option("--substeps", ia.substeps,
                      "--numeric solver steps per output slice");
  immerse->add_option("--out", ia.out_mesh, "mesh output path");
  immerse->add_option("--audit", ia.out_audit, "audit csv output path");
  immerse->add_option("--ktol", ia.ktol, "curvature gate on max |K+1|");
  immerse->add_flag("--no-gate", ia.no_gate,
                    "report curvature without gating the exit code");
  immerse->add_option("--param", ia.param_flags,
                      "bind a parameter, name=rational");

  // catalog
  auto* catalog =
      app.add_subcommand("catalog", "list the built-in problem catalog");

  // report
  auto* report = app.add_subcommand("report", "merge machine summaries");
  std::vector<std::string> report_inputs;
  std::string report_out;
  report->add_option("inputs", report_inputs, "summary files to merge");
  report->add_option("--out", report_out, "write the merged report here");

  try {
    app.parse(argc, argv);
    if (verify->parsed())
      return cmd_verify(problem_ref, seed, checks, report_path, params);
    if (immerse->parsed()) return cmd_immerse(ia);
    if (catalog->parsed()) return cmd_catalog();
    if (report->parsed()) return cmd_report(report_inputs, report_out);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  } catch (const pss::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pss::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const pss::DegeneracyError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitChecksFailed;
  } catch (const pss::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
