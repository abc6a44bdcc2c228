#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tfcd/meshes.hpp"
#include "tfcd/problem.hpp"

namespace tfcd {

/// Coefficients shared by the built-in manufactured problems.
struct Coefficients {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double mu1 = 1.0;
  double mu2 = 1.0;
  double gamma = 0.0;
};

/// Exact solution u = T(t) sin(pi x/L) sin(pi y/L) with the source chosen so
/// that it solves the continuous problem. Boundary data is zero.
struct ManufacturedProblem {
  std::string name;
  SpaceTimeFunction exact_u;
  /// Caputo derivative of exact_u in t, in closed form.
  SpaceTimeFunction exact_caputo;
  ProblemSpec spec;
  /// True when u_t is unbounded as t -> 0+.
  bool singular = false;
};

/// u = (1 + t^alpha) S.
ManufacturedProblem manufactured_singular(double alpha, double L, double Tf,
                                          const Coefficients& coeffs = {});
/// u = (1 + t^2) S.
ManufacturedProblem manufactured_smooth(double alpha, double L, double Tf,
                                        const Coefficients& coeffs = {});
/// u = S, constant in time.
ManufacturedProblem manufactured_steady(double alpha, double L, double Tf,
                                        const Coefficients& coeffs = {});
/// u = 0 with zero data.
ManufacturedProblem manufactured_zero(double alpha, double L, double Tf,
                                      const Coefficients& coeffs = {});

/// Names accepted by make_manufactured.
const std::vector<std::string>& manufactured_names();

/// Looks a problem up by name; throws std::invalid_argument for unknown names.
ManufacturedProblem make_manufactured(const std::string& name, double alpha, double L,
                                      double Tf, const Coefficients& coeffs = {});

/// Discrete L2 norm: sqrt(hx hy sum |v_{m,n}|^2) over interior nodes.
double discrete_l2_norm(const Field2D& v, const SpatialMesh& mesh);

struct ErrorNorms {
  double l2 = 0.0;
  double max = 0.0;
};

/// L2 over interior nodes and max over all nodes of numeric - exact(., ., t).
ErrorNorms error_norms(const Field2D& numeric, const SpaceTimeFunction& exact, double t,
                       const SpatialMesh& mesh);

/// min{3 - alpha, theta alpha, 1 + 2 alpha, 2 + alpha}.
double predicted_temporal_order(double alpha, double theta);

inline constexpr double kPredictedSpatialOrder = 4.0;

enum class Axis { temporal, spatial };

std::string to_string(Axis axis);
/// Accepts "temporal" or "spatial".
Axis parse_axis(const std::string& text);

struct StudyParams {
  /// Refined values: Nt for the temporal axis, Mx = My for the spatial axis.
  std::vector<int> levels;
  double theta = 4.0;
  /// Fixed Nt for spatial studies.
  int Nt = 512;
  /// Fixed Mx = My for temporal studies.
  int M = 64;
  /// Graded part [0, T]; T = Tf gives a purely graded mesh.
  double split_time = 0.0;
  /// Nhat / Nt when split_time < Tf.
  double graded_fraction = 0.5;
  /// Re-run the finest level with the other axis doubled and warn if the
  /// error moves by more than this fraction.
  bool check_subdominance = true;
  double subdominance_tolerance = 0.05;
  int threads = 1;
};

struct ConvergenceRow {
  int param = 0;
  double l2_error = 0.0;
  double max_error = 0.0;
  /// NaN on the coarsest row.
  double observed_order = 0.0;
};

struct ConvergenceReport {
  Axis axis = Axis::temporal;
  std::vector<ConvergenceRow> rows;
  double predicted_order = 0.0;
  std::vector<std::string> warnings;

  /// Observed order of the finest pair, NaN with fewer than two rows.
  [[nodiscard]] double finest_order() const;
};

/// Temporal mesh used by the studies for a given Nt.
TemporalMesh study_mesh(const StudyParams& params, int Nt, double alpha, double Tf);

/// Runs the solver once per level and measures the final-time error.
ConvergenceReport convergence_study(const ManufacturedProblem& problem, Axis axis,
                                    const StudyParams& params);

/// level,param,l2_error,max_error,observed_order,predicted_order with 17
/// significant digits and LF line endings.
void write_report_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace tfcd
