#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace tfcd {

struct SpatialMesh;

/// Nodal values on the uniform spatial grid, indexed (m, n) with m along x.
using Field2D = Eigen::MatrixXd;

using SpaceTimeFunction = std::function<double(double x, double y, double t)>;
using SpaceFunction = std::function<double(double x, double y)>;

/// Raised when a ProblemSpec violates one of its invariants.
class InvalidProblem : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Continuous problem
///
///   D_t^alpha u = lambda1 u_xx + lambda2 u_yy + mu1 u_x + mu2 u_y + gamma u + f
///
/// on (0, L)^2 x (0, Tf], with u = phi at t = 0 and u = psi on the boundary.
struct ProblemSpec {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  double gamma = 0.0;
  double alpha = 0.5;
  double L = 1.0;
  double Tf = 1.0;
  SpaceTimeFunction f;
  SpaceFunction phi;
  SpaceTimeFunction psi;

  /// Reaction coefficient left after the convection terms are removed.
  [[nodiscard]] double beta() const {
    return mu1 * mu1 / (4.0 * lambda1) + mu2 * mu2 / (4.0 * lambda2) - gamma;
  }
};

/// Returns `spec` unchanged, or throws InvalidProblem naming the failed invariant.
ProblemSpec validate_spec(ProblemSpec spec);

/// Convection-free form obtained from u = v / (P(x) Q(y)):
///
///   D_t^alpha v = lambda1 v_xx + lambda2 v_yy - beta v + F
///
/// with F = P Q f, and the initial/boundary data multiplied the same way.
class TransformedProblem {
 public:
  explicit TransformedProblem(ProblemSpec spec);

  [[nodiscard]] double beta() const { return beta_; }
  [[nodiscard]] double lambda1() const { return spec_.lambda1; }
  [[nodiscard]] double lambda2() const { return spec_.lambda2; }
  [[nodiscard]] double alpha() const { return spec_.alpha; }
  [[nodiscard]] double L() const { return spec_.L; }
  [[nodiscard]] double Tf() const { return spec_.Tf; }
  [[nodiscard]] const ProblemSpec& spec() const { return spec_; }

  [[nodiscard]] double P(double x) const;
  [[nodiscard]] double Q(double y) const;

  [[nodiscard]] double F(double x, double y, double t) const;
  [[nodiscard]] double phi_tilde(double x, double y) const;
  [[nodiscard]] double psi_tilde(double x, double y, double t) const;

 private:
  ProblemSpec spec_;
  double beta_;
  double px_rate_;
  double qy_rate_;
};

/// Throws InvalidProblem for an invalid spec.
TransformedProblem transform(const ProblemSpec& spec);

/// u[m,n] = v[m,n] / (P(x_m) Q(y_n)).
Field2D inverse_transform(const Field2D& v, const SpatialMesh& mesh,
                          const TransformedProblem& problem);

/// v[m,n] = P(x_m) Q(y_n) u[m,n].
Field2D forward_transform(const Field2D& u, const SpatialMesh& mesh,
                          const TransformedProblem& problem);

}  // namespace tfcd
