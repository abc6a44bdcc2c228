#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tfcd/caputo.hpp"
#include "tfcd/meshes.hpp"

namespace tfcd {

using Rng = std::mt19937_64;

/// Random temporal mesh whose local ratios lie in [3/4, 62]: half the draws
/// are fitted graded meshes, half have log-uniform random ratios.
TemporalMesh random_admissible_mesh(Rng& rng, double alpha);

/// alpha in {0.1, ..., 0.9}.
double random_grid_alpha(Rng& rng);

struct WeightInequalityResult {
  int meshes = 0;
  WeightInequalities tallies = make_weight_inequalities();
  [[nodiscard]] bool holds() const;
};

WeightInequalityResult weight_inequality_sweep(int meshes, std::uint64_t seed);

struct RhoResult {
  int samples = 0;
  double min = 0.0;
  double max = 0.0;
  [[nodiscard]] bool within_documented_bounds() const {
    return samples > 0 && min >= kRhoLowerBound && max <= kRhoUpperBound;
  }
};

/// Samples alpha uniformly in (0, 1) and eta log-uniformly in [3/4, 62].
RhoResult rho_sweep(int samples, std::uint64_t seed);

struct TelescopingResult {
  int meshes = 0;
  long levels = 0;
  /// max |D(c)| / (w_{i,i} |c|) for constant histories.
  double worst_constant = 0.0;
  /// max relative error of D(t) against t_{i+sigma}^{1-alpha}/Gamma(2-alpha).
  double worst_linear = 0.0;
};

TelescopingResult telescoping_sweep(int meshes, std::uint64_t seed);

struct StabilityResult {
  int samples = 0;
  /// max over samples and levels of ||zeta^i||_2 / ||zeta^0||_2.
  double worst_ratio = 0.0;
  [[nodiscard]] bool holds(double slack = 1e-13) const {
    return samples > 0 && worst_ratio <= 1.0 + slack;
  }
};

/// Runs random problems twice, once with a random boundary-zero perturbation
/// of the initial data, and tracks the discrete L2 norm of the difference.
StabilityResult stability_sweep(int samples, std::uint64_t seed);

}  // namespace tfcd
