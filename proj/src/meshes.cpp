#include "tfcd/meshes.hpp"

#include <cmath>
#include <sstream>

namespace tfcd {

namespace {

// Round-off allowance when comparing computed ratios with the admissible range.
constexpr double kRatioSlack = 1e-12;

void check_local_ratios(const std::vector<double>& tau) {
  const int nt = static_cast<int>(tau.size()) - 1;
  for (int i = 1; i <= nt - 1; ++i) {
    const double eta = tau[i + 1] / tau[i];
    if (eta < kMinLocalRatio * (1.0 - kRatioSlack) || eta > kMaxLocalRatio * (1.0 + kRatioSlack)) {
      std::ostringstream msg;
      msg << "local mesh ratio eta_" << i << " = " << eta << " leaves [" << kMinLocalRatio
          << ", " << kMaxLocalRatio << "]";
      throw MeshError(msg.str());
    }
  }
}

}  // namespace

TemporalMesh::TemporalMesh(std::vector<double> points, int nhat, double theta,
                           double split_time, double alpha)
    : points_(std::move(points)),
      tau_(points_.size(), 0.0),
      nhat_(nhat),
      theta_(theta),
      split_time_(split_time),
      alpha_(alpha),
      sigma_(1.0 - alpha / 2.0) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw MeshError("alpha must lie in (0,1)");
  if (points_.size() < 2) throw MeshError("a temporal mesh needs at least one interval");
  if (points_.front() != 0.0) throw MeshError("temporal mesh must start at t = 0");
  for (std::size_t i = 1; i < points_.size(); ++i) {
    tau_[i] = points_[i] - points_[i - 1];
    if (!(tau_[i] > 0.0)) {
      std::ostringstream msg;
      msg << "temporal mesh is not strictly increasing at index " << i;
      throw MeshError(msg.str());
    }
  }
  check_local_ratios(tau_);
}

TemporalMesh TemporalMesh::from_points(std::vector<double> points, double alpha) {
  const int nt = static_cast<int>(points.size()) - 1;
  const double tf = points.empty() ? 0.0 : points.back();
  return TemporalMesh(std::move(points), nt, 1.0, tf, alpha);
}

TemporalMesh build_fitted_mesh(int Nt, int Nhat, double theta, double T, double Tf,
                               double alpha, double min_graded_fraction) {
  std::ostringstream msg;
  if (Nt < 1 || Nhat < 1 || Nhat > Nt) {
    msg << "need 1 <= Nhat <= Nt (Nt=" << Nt << ", Nhat=" << Nhat << ")";
    throw MeshError(msg.str());
  }
  if (!(min_graded_fraction > 0.0 && min_graded_fraction < 1.0)) {
    throw MeshError("graded fraction constant must lie in (0,1)");
  }
  if (Nhat < min_graded_fraction * Nt) {
    msg << "Nhat=" << Nhat << " is below " << min_graded_fraction << " * Nt";
    throw MeshError(msg.str());
  }
  if (!(theta >= 1.0)) {
    msg << "grading exponent theta must be >= 1, got " << theta;
    throw MeshError(msg.str());
  }
  if (!(T > 0.0) || !(T <= Tf)) {
    msg << "split time must satisfy 0 < T <= Tf (T=" << T << ", Tf=" << Tf << ")";
    throw MeshError(msg.str());
  }
  if (T < Tf && Nhat == Nt) throw MeshError("a split mesh with T < Tf needs Nhat < Nt");
  if (T == Tf && Nhat < Nt) throw MeshError("Nhat < Nt requires a split time T < Tf");

  std::vector<double> points(static_cast<std::size_t>(Nt) + 1);
  for (int i = 0; i <= Nhat; ++i) {
    points[i] = T * std::pow(static_cast<double>(i) / Nhat, theta);
  }
  points[Nhat] = T;
  const int tail = Nt - Nhat;
  for (int j = 1; j <= tail; ++j) {
    points[Nhat + j] = j == tail ? Tf : T + (Tf - T) * j / tail;
  }
  return TemporalMesh(std::move(points), Nhat, theta, T, alpha);
}

std::vector<double> local_ratios(const TemporalMesh& mesh) {
  std::vector<double> eta;
  eta.reserve(static_cast<std::size_t>(std::max(mesh.Nt() - 1, 0)));
  for (int i = 1; i <= mesh.Nt() - 1; ++i) eta.push_back(mesh.tau(i + 1) / mesh.tau(i));
  return eta;
}

double t_sigma(const TemporalMesh& mesh, int i) {
  if (i < 0 || i > mesh.Nt() - 1) {
    std::ostringstream msg;
    msg << "t_sigma index " << i << " outside [0, " << mesh.Nt() - 1 << "]";
    throw std::out_of_range(msg.str());
  }
  return mesh.t(i) + mesh.sigma() * mesh.tau(i + 1);
}

SpatialMesh make_spatial_mesh(double L, int Mx, int My) {
  if (Mx < 2 || My < 2) throw MeshError("spatial mesh needs Mx >= 2 and My >= 2");
  if (!(L > 0.0)) throw MeshError("domain length must be positive");
  return SpatialMesh{Mx, My, L};
}

}  // namespace tfcd
