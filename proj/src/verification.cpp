#include "tfcd/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tfcd/adi_solver.hpp"

namespace tfcd {

namespace {

struct TimeFactor {
  std::function<double(double)> value;
  std::function<double(double)> caputo;
};

// u = T(t) S(x, y) with S = sin(k x) sin(k y), k = pi / L.
ManufacturedProblem separable(std::string name, bool singular, TimeFactor time, double alpha,
                              double L, double Tf, const Coefficients& c) {
  const double k = std::numbers::pi / L;
  auto S = [k](double x, double y) { return std::sin(k * x) * std::sin(k * y); };
  // lambda1 S_xx + lambda2 S_yy + mu1 S_x + mu2 S_y + gamma S
  auto spatial = [k, c](double x, double y) {
    const double sx = std::sin(k * x);
    const double sy = std::sin(k * y);
    const double s = sx * sy;
    return -(c.lambda1 + c.lambda2) * k * k * s + c.mu1 * k * std::cos(k * x) * sy +
           c.mu2 * k * sx * std::cos(k * y) + c.gamma * s;
  };

  ManufacturedProblem p;
  p.name = std::move(name);
  p.singular = singular;
  p.exact_u = [S, time](double x, double y, double t) { return time.value(t) * S(x, y); };
  p.exact_caputo = [S, time](double x, double y, double t) { return time.caputo(t) * S(x, y); };
  p.spec.lambda1 = c.lambda1;
  p.spec.lambda2 = c.lambda2;
  p.spec.mu1 = c.mu1;
  p.spec.mu2 = c.mu2;
  p.spec.gamma = c.gamma;
  p.spec.alpha = alpha;
  p.spec.L = L;
  p.spec.Tf = Tf;
  p.spec.f = [S, spatial, time](double x, double y, double t) {
    return time.caputo(t) * S(x, y) - time.value(t) * spatial(x, y);
  };
  p.spec.phi = [S, time](double x, double y) { return time.value(0.0) * S(x, y); };
  p.spec.psi = [](double, double, double) { return 0.0; };
  p.spec = validate_spec(std::move(p.spec));
  return p;
}

}  // namespace

ManufacturedProblem manufactured_singular(double alpha, double L, double Tf,
                                          const Coefficients& coeffs) {
  const double g = std::tgamma(1.0 + alpha);
  TimeFactor time{[alpha](double t) { return 1.0 + std::pow(t, alpha); },
                  [g](double) { return g; }};
  return separable("singular", true, std::move(time), alpha, L, Tf, coeffs);
}

ManufacturedProblem manufactured_smooth(double alpha, double L, double Tf,
                                        const Coefficients& coeffs) {
  const double g = 2.0 / std::tgamma(3.0 - alpha);
  TimeFactor time{[](double t) { return 1.0 + t * t; },
                  [g, alpha](double t) { return g * std::pow(t, 2.0 - alpha); }};
  return separable("smooth", false, std::move(time), alpha, L, Tf, coeffs);
}

ManufacturedProblem manufactured_steady(double alpha, double L, double Tf,
                                        const Coefficients& coeffs) {
  TimeFactor time{[](double) { return 1.0; }, [](double) { return 0.0; }};
  return separable("steady", false, std::move(time), alpha, L, Tf, coeffs);
}

ManufacturedProblem manufactured_zero(double alpha, double L, double Tf,
                                      const Coefficients& coeffs) {
  TimeFactor time{[](double) { return 0.0; }, [](double) { return 0.0; }};
  ManufacturedProblem p = separable("zero", false, std::move(time), alpha, L, Tf, coeffs);
  p.exact_u = [](double, double, double) { return 0.0; };
  p.exact_caputo = p.exact_u;
  p.spec.f = p.exact_u;
  p.spec.phi = [](double, double) { return 0.0; };
  return p;
}

const std::vector<std::string>& manufactured_names() {
  static const std::vector<std::string> names{"singular", "smooth", "steady", "zero"};
  return names;
}

ManufacturedProblem make_manufactured(const std::string& name, double alpha, double L,
                                      double Tf, const Coefficients& coeffs) {
  if (name == "singular") return manufactured_singular(alpha, L, Tf, coeffs);
  if (name == "smooth") return manufactured_smooth(alpha, L, Tf, coeffs);
  if (name == "steady") return manufactured_steady(alpha, L, Tf, coeffs);
  if (name == "zero") return manufactured_zero(alpha, L, Tf, coeffs);
  std::ostringstream msg;
  msg << "unknown problem '" << name << "' (expected one of";
  for (const auto& n : manufactured_names()) msg << ' ' << n;
  msg << ')';
  throw std::invalid_argument(msg.str());
}

double discrete_l2_norm(const Field2D& v, const SpatialMesh& mesh) {
  if (v.rows() != mesh.Mx + 1 || v.cols() != mesh.My + 1) {
    throw std::invalid_argument("field shape does not match the spatial mesh");
  }
  const double sum = v.block(1, 1, mesh.Mx - 1, mesh.My - 1).squaredNorm();
  return std::sqrt(mesh.hx() * mesh.hy() * sum);
}

ErrorNorms error_norms(const Field2D& numeric, const SpaceTimeFunction& exact, double t,
                       const SpatialMesh& mesh) {
  if (numeric.rows() != mesh.Mx + 1 || numeric.cols() != mesh.My + 1) {
    throw std::invalid_argument("field shape does not match the spatial mesh");
  }
  Field2D diff(numeric.rows(), numeric.cols());
  for (int n = 0; n <= mesh.My; ++n) {
    for (int m = 0; m <= mesh.Mx; ++m) diff(m, n) = numeric(m, n) - exact(mesh.x(m), mesh.y(n), t);
  }
  return {discrete_l2_norm(diff, mesh), diff.cwiseAbs().maxCoeff()};
}

double predicted_temporal_order(double alpha, double theta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(theta >= 1.0)) throw std::invalid_argument("theta must be >= 1");
  return std::min({3.0 - alpha, theta * alpha, 1.0 + 2.0 * alpha, 2.0 + alpha});
}

std::string to_string(Axis axis) { return axis == Axis::temporal ? "temporal" : "spatial"; }

Axis parse_axis(const std::string& text) {
  if (text == "temporal") return Axis::temporal;
  if (text == "spatial") return Axis::spatial;
  throw std::invalid_argument("axis must be 'temporal' or 'spatial', got '" + text + "'");
}

double ConvergenceReport::finest_order() const {
  if (rows.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return rows.back().observed_order;
}

TemporalMesh study_mesh(const StudyParams& params, int Nt, double alpha, double Tf) {
  const double T = params.split_time > 0.0 ? params.split_time : Tf;
  if (T >= Tf) return build_fitted_mesh(Nt, Nt, params.theta, Tf, Tf, alpha);
  const int nhat = std::max(1, static_cast<int>(std::lround(params.graded_fraction * Nt)));
  return build_fitted_mesh(Nt, nhat, params.theta, T, Tf, alpha);
}

namespace {

ErrorNorms final_error(const ManufacturedProblem& problem, const StudyParams& params, int Nt,
                       int M) {
  const ProblemSpec& spec = problem.spec;
  const TemporalMesh tmesh = study_mesh(params, Nt, spec.alpha, spec.Tf);
  const SpatialMesh smesh = make_spatial_mesh(spec.L, M, M);
  SolveOptions options;
  options.levels = {tmesh.Nt()};
  options.threads = params.threads;
  const std::vector<Field2D> u = solve(spec, tmesh, smesh, options);
  return error_norms(u.front(), problem.exact_u, tmesh.Tf(), smesh);
}

}  // namespace

ConvergenceReport convergence_study(const ManufacturedProblem& problem, Axis axis,
                                    const StudyParams& params) {
  if (params.levels.empty()) throw std::invalid_argument("convergence study needs levels");
  for (std::size_t j = 1; j < params.levels.size(); ++j) {
    if (params.levels[j] <= params.levels[j - 1]) {
      throw std::invalid_argument("refinement levels must be strictly increasing");
    }
  }

  ConvergenceReport report;
  report.axis = axis;
  report.predicted_order = axis == Axis::temporal
                               ? predicted_temporal_order(problem.spec.alpha, params.theta)
                               : kPredictedSpatialOrder;

  for (int level : params.levels) {
    const ErrorNorms e = axis == Axis::temporal ? final_error(problem, params, level, params.M)
                                                : final_error(problem, params, params.Nt, level);
    ConvergenceRow row;
    row.param = level;
    row.l2_error = e.l2;
    row.max_error = e.max;
    row.observed_order = std::numeric_limits<double>::quiet_NaN();
    if (!report.rows.empty()) {
      const ConvergenceRow& coarse = report.rows.back();
      row.observed_order = std::log(coarse.l2_error / row.l2_error) /
                           std::log(static_cast<double>(level) / coarse.param);
    }
    report.rows.push_back(row);
  }

  if (params.check_subdominance) {
    const ConvergenceRow& finest = report.rows.back();
    const ErrorNorms doubled = axis == Axis::temporal
                                   ? final_error(problem, params, finest.param, 2 * params.M)
                                   : final_error(problem, params, 2 * params.Nt, finest.param);
    const double change = std::abs(doubled.l2 - finest.l2_error) / finest.l2_error;
    if (change > params.subdominance_tolerance) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "finest-level error changes by " << 100.0 * change << "% when "
          << (axis == Axis::temporal ? "M" : "Nt")
          << " is doubled; the other axis may pollute the observed order";
      report.warnings.push_back(msg.str());
    }
  }
  return report;
}

void write_report_csv(std::ostream& out, const ConvergenceReport& report) {
  std::ostringstream csv;
  csv.imbue(std::locale::classic());
  csv.precision(17);
  csv << "level,param,l2_error,max_error,observed_order,predicted_order\n";
  for (std::size_t j = 0; j < report.rows.size(); ++j) {
    const ConvergenceRow& r = report.rows[j];
    csv << j << ',' << r.param << ',' << r.l2_error << ',' << r.max_error << ',';
    if (!std::isnan(r.observed_order)) csv << r.observed_order;
    csv << ',' << report.predicted_order << '\n';
  }
  out << csv.str();
}

}  // namespace tfcd
