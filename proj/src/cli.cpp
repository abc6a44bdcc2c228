#include "tfcd/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <locale>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "tfcd/adi_solver.hpp"
#include "tfcd/properties.hpp"

namespace tfcd::cli {

namespace {

std::string workflow_name(Workflow w) {
  switch (w) {
    case Workflow::solve:
      return "solve";
    case Workflow::convergence:
      return "convergence";
    case Workflow::check:
      return "check";
  }
  return "?";
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

template <typename T>
std::string str(const T& value) {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s << value;
  return s.str();
}

void validate(RunConfig& c) {
  require(c.alpha > 0.0 && c.alpha < 1.0, "alpha must lie in (0,1), got " + str(c.alpha));
  require(c.theta >= 1.0, "theta must be >= 1, got " + str(c.theta));
  require(c.Nt >= 1, "nt must be positive, got " + str(c.Nt));
  require(c.Nhat >= 0, "nhat must be positive, got " + str(c.Nhat));
  require(c.Nhat <= c.Nt,
          "nhat (" + str(c.Nhat) + ") must not exceed nt (" + str(c.Nt) + ")");
  require(c.Tf > 0.0, "tf must be positive, got " + str(c.Tf));
  require(c.split_time >= 0.0 && c.split_time <= c.Tf,
          "split-time must lie in (0, tf], got " + str(c.split_time));
  require(c.Mx >= 2 && c.My >= 2, "mx and my must be at least 2");
  require(c.tolerance >= 0.0, "tolerance must be nonnegative");
  require(c.threads >= 1, "threads must be positive");
  for (std::size_t j = 0; j < c.levels.size(); ++j) {
    require(c.levels[j] >= 1, "levels must be positive");
    require(j == 0 || c.levels[j] > c.levels[j - 1], "levels must be strictly increasing");
  }
  for (int level : c.save_levels) {
    require(level >= 0 && level <= c.Nt,
            "save-levels entries must lie in [0, nt], got " + str(level));
  }
  require(c.inequality_meshes >= 1 && c.rho_samples >= 1 && c.stability_samples >= 1,
          "sample counts must be positive");

  try {
    (void)make_manufactured(c.problem, c.alpha, c.L, c.Tf, c.coeffs);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.workflow == Workflow::solve) {
    try {
      (void)temporal_mesh(c);
    } catch (const MeshError& e) {
      throw UsageError(e.what());
    }
  }
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
  return file;
}

// Writes `text` to --out when given, else to `out`.
void emit(const RunConfig& c, std::ostream& out, const std::string& text) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file = open_output(c.out);
  file << text;
  if (!file) throw std::runtime_error("failed writing '" + c.out + "'");
}

// Summary lines go to the stream that does not carry the CSV.
std::ostream& summary_stream(const RunConfig& c, std::ostream& out, std::ostream& err) {
  return c.out.empty() ? err : out;
}

std::ostringstream number_stream() {
  std::ostringstream s;
  s.imbue(std::locale::classic());
  s.precision(17);
  return s;
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig c;
  CLI::App app{"Compact ADI solver for 2D time-fractional convection-diffusion", "tfcd"};
  app.set_config("--config", "", "Read flags from an INI/TOML file (flags given here win)");
  app.allow_config_extras(false);
  app.require_subcommand(1);
  app.add_subcommand("solve", "March one problem and write t,x,y,u as CSV")->fallthrough();
  app.add_subcommand("convergence", "Run a refinement study and write its CSV report")
      ->fallthrough();
  app.add_subcommand("check", "Run the coefficient and stability property sweeps")
      ->fallthrough();

  std::string axis = "temporal";
  app.add_option("--problem", c.problem, "Manufactured problem: singular|smooth|steady|zero")
      ->capture_default_str();
  app.add_option("--alpha", c.alpha, "Fractional order in (0,1)")->capture_default_str();
  app.add_option("--theta", c.theta, "Grading exponent >= 1")->capture_default_str();
  auto* nt = app.add_option("--nt", c.Nt, "Number of time steps")->capture_default_str();
  app.add_option("--nhat", c.Nhat, "Graded steps on [0, split-time]; 0 picks a default");
  app.add_option("--split-time", c.split_time, "End of the graded part; 0 means tf");
  app.add_option("--tf", c.Tf, "Final time")->capture_default_str();
  app.add_option("--length", c.L, "Side of the square domain")->capture_default_str();
  auto* mx = app.add_option("--mx", c.Mx, "Intervals along x")->capture_default_str();
  auto* my = app.add_option("--my", c.My, "Intervals along y")->capture_default_str();
  auto* levels = app.add_option("--levels", c.levels, "Refinement levels, comma separated")
                     ->delimiter(',');
  app.add_option("--axis", axis, "Convergence axis: temporal|spatial")
      ->check(CLI::IsMember({"temporal", "spatial"}))
      ->capture_default_str();
  app.add_option("--tolerance", c.tolerance, "Allowed |observed - predicted| order")
      ->capture_default_str();
  app.add_option("--out", c.out, "Output file (default stdout)");
  app.add_option("--threads", c.threads, "Threads for the line solves")
      ->envname(kThreadsEnv)
      ->capture_default_str();
  app.add_option("--save-levels", c.save_levels, "Time levels written by solve (default nt)")
      ->delimiter(',');
  app.add_option("--seed", c.seed, "Seed of the property sweeps")->capture_default_str();
  app.add_option("--lambda1", c.coeffs.lambda1, "Diffusion along x")->capture_default_str();
  app.add_option("--lambda2", c.coeffs.lambda2, "Diffusion along y")->capture_default_str();
  app.add_option("--mu1", c.coeffs.mu1, "Convection along x")->capture_default_str();
  app.add_option("--mu2", c.coeffs.mu2, "Convection along y")->capture_default_str();
  app.add_option("--gamma", c.coeffs.gamma, "Reaction coefficient")->capture_default_str();
  app.add_option("--inequality-meshes", c.inequality_meshes, "Meshes in the weight-inequality sweep")
      ->capture_default_str();
  app.add_option("--rho-samples", c.rho_samples, "Samples in the rho sweep")
      ->capture_default_str();
  app.add_option("--stability-samples", c.stability_samples, "Perturbed runs")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::CallForAllHelp&) {
    throw HelpRequested(app.help("", CLI::AppFormatMode::All));
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  const std::string chosen = app.get_subcommands().front()->get_name();
  c.workflow = chosen == "solve"         ? Workflow::solve
               : chosen == "convergence" ? Workflow::convergence
                                         : Workflow::check;
  c.axis = parse_axis(axis);
  if (c.workflow == Workflow::convergence) {
    if (c.axis == Axis::spatial && nt->count() == 0) c.Nt = 512;
    if (c.axis == Axis::temporal && mx->count() == 0 && my->count() == 0) c.Mx = c.My = 64;
    if (levels->count() == 0) {
      c.levels = c.axis == Axis::temporal ? std::vector<int>{16, 32, 64, 128, 256}
                                          : std::vector<int>{4, 8, 16, 32};
    }
  }
  validate(c);
  return c;
}

TemporalMesh temporal_mesh(const RunConfig& c) {
  const double T = c.split_time > 0.0 ? c.split_time : c.Tf;
  int nhat = c.Nhat;
  if (nhat == 0) nhat = T < c.Tf ? std::max(1, (c.Nt + 1) / 2) : c.Nt;
  return build_fitted_mesh(c.Nt, nhat, c.theta, T, c.Tf, c.alpha);
}

int cmd_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ManufacturedProblem problem = make_manufactured(c.problem, c.alpha, c.L, c.Tf, c.coeffs);
  const TemporalMesh tmesh = temporal_mesh(c);
  const SpatialMesh smesh = make_spatial_mesh(c.L, c.Mx, c.My);
  SolveOptions options;
  options.levels = c.save_levels.empty() ? std::vector<int>{tmesh.Nt()} : c.save_levels;
  options.threads = c.threads;
  const std::vector<Field2D> u = solve(problem.spec, tmesh, smesh, options);

  std::ostringstream csv = number_stream();
  csv << "t,x,y,u\n";
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double t = tmesh.t(options.levels[j]);
    for (int m = 0; m <= smesh.Mx; ++m) {
      for (int n = 0; n <= smesh.My; ++n) {
        csv << t << ',' << smesh.x(m) << ',' << smesh.y(n) << ',' << u[j](m, n) << '\n';
      }
    }
  }
  emit(c, out, csv.str());

  const ErrorNorms e = error_norms(u.back(), problem.exact_u, tmesh.t(options.levels.back()), smesh);
  std::ostringstream line = number_stream();
  line << "solve " << problem.name << ": t=" << tmesh.t(options.levels.back())
       << " l2_error=" << e.l2 << " max_error=" << e.max << '\n';
  summary_stream(c, out, err) << line.str();
  return kExitOk;
}

int cmd_convergence(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ManufacturedProblem problem = make_manufactured(c.problem, c.alpha, c.L, c.Tf, c.coeffs);
  StudyParams params;
  params.levels = c.levels;
  params.theta = c.theta;
  params.Nt = c.Nt;
  params.M = c.Mx;
  params.split_time = c.split_time;
  if (c.Nhat > 0) params.graded_fraction = static_cast<double>(c.Nhat) / c.Nt;
  params.threads = c.threads;
  const ConvergenceReport report = convergence_study(problem, c.axis, params);

  std::ostringstream csv;
  write_report_csv(csv, report);
  emit(c, out, csv.str());
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';

  const double observed = report.finest_order();
  const bool pass = std::abs(observed - report.predicted_order) <= c.tolerance;
  std::ostringstream line;
  line.imbue(std::locale::classic());
  line << std::setprecision(4) << "convergence " << to_string(c.axis) << ' ' << problem.name
       << ": predicted order " << report.predicted_order << ", finest observed order "
       << observed << ", tolerance " << c.tolerance << ": " << (pass ? "PASS" : "FAIL") << '\n';
  summary_stream(c, out, err) << line.str();
  return pass ? kExitOk : kExitPropertyFail;
}

int cmd_check(const RunConfig& c, std::ostream& out, std::ostream&) {
  std::ostringstream report;
  report.imbue(std::locale::classic());
  report << std::setprecision(6);
  bool all = true;
  auto verdict = [&all](bool ok) {
    all = all && ok;
    return ok ? "PASS" : "FAIL";
  };

  const WeightInequalityResult ineq = weight_inequality_sweep(c.inequality_meshes, c.seed);
  report << "weight inequalities over " << ineq.meshes << " meshes\n";
  for (const InequalityTally& t : ineq.tallies) {
    report << "  " << t.name << ": samples=" << t.samples << " worst_margin=" << t.worst_margin
           << ' ' << verdict(t.holds()) << '\n';
  }

  const RhoResult rho = rho_sweep(c.rho_samples, c.seed + 1);
  report << "rho over " << rho.samples << " (alpha, eta) pairs: min=" << rho.min
         << " max=" << rho.max << " documented=[" << kRhoLowerBound << ", " << kRhoUpperBound
         << "] " << verdict(rho.within_documented_bounds()) << '\n';

  const TelescopingResult tele = telescoping_sweep(c.inequality_meshes, c.seed + 2);
  report << "telescoping over " << tele.levels << " levels: constant=" << tele.worst_constant
         << ' ' << verdict(tele.worst_constant <= 1e-13) << " linear=" << tele.worst_linear
         << ' ' << verdict(tele.worst_linear <= 1e-11) << '\n';

  const StabilityResult stab = stability_sweep(c.stability_samples, c.seed + 3);
  report << "stability over " << stab.samples << " perturbations: max ||zeta^i||/||zeta^0||="
         << std::setprecision(17) << stab.worst_ratio << ' ' << verdict(stab.holds()) << '\n';

  report << (all ? "all properties PASS" : "some properties FAIL") << '\n';
  emit(c, out, report.str());
  return all ? kExitOk : kExitPropertyFail;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    config = parse_config(argc, argv);
  } catch (const HelpRequested& help) {
    out << help.what();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  try {
    switch (config.workflow) {
      case Workflow::solve:
        return cmd_solve(config, out, err);
      case Workflow::convergence:
        return cmd_convergence(config, out, err);
      case Workflow::check:
        return cmd_check(config, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << workflow_name(config.workflow) << " failed: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace tfcd::cli
