#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "tfcd/meshes.hpp"

namespace tfcd {

/// L2-1sigma convolution weights w_{i,0..i} for one time level.
struct WeightRow {
  int level = 0;
  std::vector<double> weights;
  double sigma = 1.0;
  double alpha = 0.5;

  [[nodiscard]] double operator[](int k) const { return weights[static_cast<std::size_t>(k)]; }
  [[nodiscard]] double diagonal() const { return weights.back(); }
};

/// r_{i,k} = 1/Gamma(1-alpha) * int_{t_k}^{min(t_{k+1}, t_{i+sigma})} (t_{i+sigma} - v)^{-alpha} dv,
/// for 0 <= k <= i <= Nt-1.
double r_coeff(const TemporalMesh& mesh, int i, int k);

/// s_{i,k} = 2/(Gamma(1-alpha) (t_{k+2} - t_k))
///           * int_{t_k}^{t_{k+1}} (t_{i+sigma} - v)^{-alpha} (v - t_{k+1/2}) dv,
/// for 0 <= k <= i-1.
double s_coeff(const TemporalMesh& mesh, int i, int k);

/// Weights of level i (0 <= i <= Nt-1).
WeightRow weight_row(const TemporalMesh& mesh, int i);

/// Factor rho in w_{i,i} = sigma^{1-alpha} rho / (Gamma(2-alpha) tau_{i+1}^alpha),
/// evaluated from the local ratio eta_i alone (1 <= i <= Nt-1).
double rho(const TemporalMesh& mesh, int i);

/// Same factor as a function of (alpha, eta) with sigma = 1 - alpha/2.
double rho_from_ratio(double alpha, double eta);

/// Documented bounds on rho for eta in [3/4, 62].
inline constexpr double kRhoLowerBound = 1.6597542;
inline constexpr double kRhoUpperBound = 13.215168;

/// L2-1sigma approximation of the Caputo derivative at t_{i+sigma}, given
/// g(t_0), ..., g(t_{i+1}) and the weights of level i.
double discrete_caputo(std::span<const double> history, const WeightRow& row);

/// Running record of one weight inequality over a sweep.
struct InequalityTally {
  std::string name;
  long samples = 0;
  double worst_margin = 0.0;  // smallest relative margin seen; > 0 means it held

  void record(double margin);
  [[nodiscard]] bool holds() const { return samples > 0 && worst_margin > 0.0; }
};

/// Relative margins of the five coefficient inequalities:
///   (i)   w_{i,0} > t_{i+sigma}^{-alpha} / Gamma(1-alpha)
///   (ii)  (2 sigma - 1) w_{1,1} - sigma w_{1,0} > 0
///   (iii) w_{i,1} > w_{i,0}, i >= 1
///   (iv)  w_{i,k-1} < w_{i,k} wherever eta_{k-1}^2 (eta_{k-1}+1) >= eta_k/(eta_k+1)
///   (v)   (2 sigma - 1) w_{i,i} - sigma w_{i,i-1} > 0 wherever
///         eta_{i-1}^2 (2 - 1/sigma + eta_i (eta_i + 2)) >= eta_i (eta_i + 1)/(eta_{i-1} + 1)
/// Conditional items only count levels where their hypothesis holds.
using WeightInequalities = std::array<InequalityTally, 5>;

WeightInequalities make_weight_inequalities();
void tally_weight_inequalities(const TemporalMesh& mesh, WeightInequalities& tallies);

}  // namespace tfcd
