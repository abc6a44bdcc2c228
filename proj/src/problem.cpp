#include "tfcd/problem.hpp"

#include <cmath>
#include <sstream>

#include "tfcd/meshes.hpp"

namespace tfcd {

ProblemSpec validate_spec(ProblemSpec spec) {
  std::ostringstream msg;
  if (!(spec.lambda1 > 0.0) || !(spec.lambda2 > 0.0)) {
    msg << "diffusion coefficients must be positive (lambda1=" << spec.lambda1
        << ", lambda2=" << spec.lambda2 << ")";
    throw InvalidProblem(msg.str());
  }
  if (!(spec.alpha > 0.0 && spec.alpha < 1.0)) {
    msg << "alpha must lie in (0,1), got " << spec.alpha;
    throw InvalidProblem(msg.str());
  }
  if (!(spec.beta() >= 0.0)) {
    msg << "mu1^2/(4 lambda1) + mu2^2/(4 lambda2) - gamma must be nonnegative, got "
        << spec.beta();
    throw InvalidProblem(msg.str());
  }
  if (!(spec.L > 0.0) || !(spec.Tf > 0.0)) {
    msg << "domain length and final time must be positive (L=" << spec.L
        << ", Tf=" << spec.Tf << ")";
    throw InvalidProblem(msg.str());
  }
  if (!spec.f || !spec.phi || !spec.psi) {
    throw InvalidProblem("source, initial and boundary functions must all be set");
  }
  return spec;
}

TransformedProblem::TransformedProblem(ProblemSpec spec)
    : spec_(validate_spec(std::move(spec))),
      beta_(spec_.beta()),
      px_rate_(spec_.mu1 / (2.0 * spec_.lambda1)),
      qy_rate_(spec_.mu2 / (2.0 * spec_.lambda2)) {}

double TransformedProblem::P(double x) const { return std::exp(px_rate_ * x); }
double TransformedProblem::Q(double y) const { return std::exp(qy_rate_ * y); }

double TransformedProblem::F(double x, double y, double t) const {
  return P(x) * Q(y) * spec_.f(x, y, t);
}

double TransformedProblem::phi_tilde(double x, double y) const {
  return P(x) * Q(y) * spec_.phi(x, y);
}

double TransformedProblem::psi_tilde(double x, double y, double t) const {
  return P(x) * Q(y) * spec_.psi(x, y, t);
}

TransformedProblem transform(const ProblemSpec& spec) { return TransformedProblem(spec); }

namespace {

void check_shape(const Field2D& field, const SpatialMesh& mesh) {
  if (field.rows() != mesh.Mx + 1 || field.cols() != mesh.My + 1) {
    throw std::invalid_argument("field dimensions do not match the spatial mesh");
  }
}

Eigen::VectorXd sample_p(const SpatialMesh& mesh, const TransformedProblem& problem) {
  Eigen::VectorXd p(mesh.Mx + 1);
  for (int m = 0; m <= mesh.Mx; ++m) p[m] = problem.P(mesh.x(m));
  return p;
}

Eigen::RowVectorXd sample_q(const SpatialMesh& mesh, const TransformedProblem& problem) {
  Eigen::RowVectorXd q(mesh.My + 1);
  for (int n = 0; n <= mesh.My; ++n) q[n] = problem.Q(mesh.y(n));
  return q;
}

}  // namespace

Field2D inverse_transform(const Field2D& v, const SpatialMesh& mesh,
                          const TransformedProblem& problem) {
  check_shape(v, mesh);
  const Field2D pq = sample_p(mesh, problem) * sample_q(mesh, problem);
  return v.cwiseQuotient(pq);
}

Field2D forward_transform(const Field2D& u, const SpatialMesh& mesh,
                          const TransformedProblem& problem) {
  check_shape(u, mesh);
  const Field2D pq = sample_p(mesh, problem) * sample_q(mesh, problem);
  return u.cwiseProduct(pq);
}

}  // namespace tfcd
