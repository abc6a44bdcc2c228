#pragma once

#include <span>
#include <stdexcept>
#include <vector>

namespace tfcd {

class MeshError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Admissible range for the local ratio tau_{i+1} / tau_i.
inline constexpr double kMinLocalRatio = 0.75;
inline constexpr double kMaxLocalRatio = 62.0;

/// Fitted time grid: power-graded on [0, T], uniform on [T, Tf].
///
/// Intervals are 1-based as tau(i) = t_i - t_{i-1}, 1 <= i <= Nt. The weight
/// sigma is fixed to 1 - alpha/2.
class TemporalMesh {
 public:
  /// Wraps an arbitrary grid (used for property sweeps). The points must start
  /// at 0, be strictly increasing, and satisfy the local-ratio bounds.
  static TemporalMesh from_points(std::vector<double> points, double alpha);

  [[nodiscard]] std::span<const double> points() const { return points_; }
  [[nodiscard]] double t(int i) const { return points_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] double tau(int i) const { return tau_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] int Nt() const { return static_cast<int>(points_.size()) - 1; }
  [[nodiscard]] int Nhat() const { return nhat_; }
  [[nodiscard]] double theta() const { return theta_; }
  [[nodiscard]] double split_time() const { return split_time_; }
  [[nodiscard]] double Tf() const { return points_.back(); }
  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] double sigma() const { return sigma_; }

 private:
  friend TemporalMesh build_fitted_mesh(int, int, double, double, double, double, double);

  TemporalMesh(std::vector<double> points, int nhat, double theta, double split_time,
               double alpha);

  std::vector<double> points_;
  std::vector<double> tau_;  // tau_[0] unused
  int nhat_;
  double theta_;
  double split_time_;
  double alpha_;
  double sigma_;
};

/// Graded points t_i = T (i/Nhat)^theta for i <= Nhat, then Nt - Nhat uniform
/// steps to Tf. Throws MeshError on inconsistent parameters, or naming the
/// first index whose local ratio leaves [3/4, 62].
///
/// `min_graded_fraction` is the constant c in Nhat >= c Nt.
TemporalMesh build_fitted_mesh(int Nt, int Nhat, double theta, double T, double Tf,
                               double alpha, double min_graded_fraction = 0.5);

/// Pure graded mesh on [0, Tf] (T = Tf, Nhat = Nt).
inline TemporalMesh build_graded_mesh(int Nt, double theta, double Tf, double alpha) {
  return build_fitted_mesh(Nt, Nt, theta, Tf, Tf, alpha);
}

/// eta_i = tau_{i+1} / tau_i for 1 <= i <= Nt-1; element j holds eta_{j+1}.
std::vector<double> local_ratios(const TemporalMesh& mesh);

/// t_{i+sigma} = t_i + sigma tau_{i+1}, 0 <= i <= Nt-1.
double t_sigma(const TemporalMesh& mesh, int i);

/// Uniform grid on [0, L]^2 with x_m = m hx, y_n = n hy.
struct SpatialMesh {
  int Mx = 0;
  int My = 0;
  double L = 1.0;

  [[nodiscard]] double hx() const { return L / Mx; }
  [[nodiscard]] double hy() const { return L / My; }
  [[nodiscard]] double x(int m) const { return m == Mx ? L : m * hx(); }
  [[nodiscard]] double y(int n) const { return n == My ? L : n * hy(); }
  [[nodiscard]] int interior_count() const { return (Mx - 1) * (My - 1); }
};

/// Throws MeshError unless Mx, My >= 2 and L > 0.
SpatialMesh make_spatial_mesh(double L, int Mx, int My);

}  // namespace tfcd
