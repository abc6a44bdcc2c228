#include "tfcd/properties.hpp"

#include <algorithm>
#include <cmath>

#include "tfcd/adi_solver.hpp"
#include "tfcd/problem.hpp"
#include "tfcd/verification.hpp"

namespace tfcd {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace

double random_grid_alpha(Rng& rng) { return 0.1 * uniform_int(rng, 1, 9); }

TemporalMesh random_admissible_mesh(Rng& rng, double alpha) {
  const double Tf = log_uniform(rng, 0.1, 10.0);
  if (uniform_int(rng, 0, 1) == 0) {
    while (true) {
      const int Nt = uniform_int(rng, 4, 64);
      const double theta = uniform(rng, 1.0, 5.9);
      try {
        if (uniform_int(rng, 0, 1) == 0) return build_graded_mesh(Nt, theta, Tf, alpha);
        const int nhat = uniform_int(rng, (Nt + 1) / 2, Nt - 1);
        return build_fitted_mesh(Nt, nhat, theta, uniform(rng, 0.1, 0.9) * Tf, Tf, alpha);
      } catch (const MeshError&) {
        // The graded/uniform junction can leave [3/4, 62]; draw again.
      }
    }
  }
  while (true) {
    const int Nt = uniform_int(rng, 3, 10);
    std::vector<double> tau{1.0};
    for (int i = 1; i < Nt; ++i) tau.push_back(tau.back() * log_uniform(rng, 0.75, 62.0));
    double total = 0.0;
    for (double t : tau) total += t;
    if (*std::min_element(tau.begin(), tau.end()) / total < 1e-12) continue;
    std::vector<double> points{0.0};
    for (double t : tau) points.push_back(points.back() + t * Tf / total);
    points.back() = Tf;
    try {
      return TemporalMesh::from_points(std::move(points), alpha);
    } catch (const MeshError&) {
      // Rescaling can push a ratio a rounding step past the bounds.
    }
  }
}

bool WeightInequalityResult::holds() const {
  return std::all_of(tallies.begin(), tallies.end(),
                     [](const InequalityTally& t) { return t.holds(); });
}

WeightInequalityResult weight_inequality_sweep(int meshes, std::uint64_t seed) {
  Rng rng(seed);
  WeightInequalityResult result;
  for (int j = 0; j < meshes; ++j) {
    const double alpha = random_grid_alpha(rng);
    tally_weight_inequalities(random_admissible_mesh(rng, alpha), result.tallies);
    ++result.meshes;
  }
  return result;
}

RhoResult rho_sweep(int samples, std::uint64_t seed) {
  Rng rng(seed);
  RhoResult result;
  for (int j = 0; j < samples; ++j) {
    double alpha = 0.0;
    while (alpha <= 0.0) alpha = uniform(rng, 0.0, 1.0);
    const double eta = log_uniform(rng, kMinLocalRatio, kMaxLocalRatio);
    const double value = rho_from_ratio(alpha, eta);
    result.min = j == 0 ? value : std::min(result.min, value);
    result.max = j == 0 ? value : std::max(result.max, value);
    ++result.samples;
  }
  return result;
}

TelescopingResult telescoping_sweep(int meshes, std::uint64_t seed) {
  Rng rng(seed);
  TelescopingResult result;
  for (int j = 0; j < meshes; ++j) {
    const double alpha = random_grid_alpha(rng);
    const TemporalMesh mesh = random_admissible_mesh(rng, alpha);
    const double c = uniform(rng, -10.0, 10.0);
    const double g2 = std::tgamma(2.0 - alpha);
    for (int i = 0; i < mesh.Nt(); ++i) {
      const WeightRow row = weight_row(mesh, i);
      std::vector<double> constant(static_cast<std::size_t>(i) + 2, c);
      std::vector<double> linear(mesh.points().begin(), mesh.points().begin() + i + 2);
      const double dc = std::abs(discrete_caputo(constant, row)) / (row.diagonal() * std::abs(c));
      const double exact = std::pow(t_sigma(mesh, i), 1.0 - alpha) / g2;
      const double dl = std::abs(discrete_caputo(linear, row) - exact) / exact;
      result.worst_constant = std::max(result.worst_constant, dc);
      result.worst_linear = std::max(result.worst_linear, dl);
      ++result.levels;
    }
    ++result.meshes;
  }
  return result;
}

StabilityResult stability_sweep(int samples, std::uint64_t seed) {
  Rng rng(seed);
  StabilityResult result;
  for (int j = 0; j < samples; ++j) {
    const double alpha = uniform(rng, 0.05, 0.95);
    Coefficients c;
    c.lambda1 = log_uniform(rng, 0.1, 10.0);
    c.lambda2 = log_uniform(rng, 0.1, 10.0);
    c.mu1 = uniform(rng, -2.0, 2.0);
    c.mu2 = uniform(rng, -2.0, 2.0);
    const double beta0 = c.mu1 * c.mu1 / (4 * c.lambda1) + c.mu2 * c.mu2 / (4 * c.lambda2);
    c.gamma = uniform(rng, -2.0, beta0);
    const ManufacturedProblem problem = manufactured_singular(alpha, 1.0, 1.0, c);
    const TransformedProblem transformed = transform(problem.spec);

    const int Nt = uniform_int(rng, 4, 24);
    const TemporalMesh tmesh = build_graded_mesh(Nt, uniform(rng, 1.0, 4.0), 1.0, alpha);
    const SpatialMesh smesh = make_spatial_mesh(1.0, uniform_int(rng, 3, 16), uniform_int(rng, 3, 16));

    AdiSolver base(transformed, tmesh, smesh);
    Field2D zeta0 = Field2D::Zero(smesh.Mx + 1, smesh.My + 1);
    for (int n = 1; n < smesh.My; ++n) {
      for (int m = 1; m < smesh.Mx; ++m) zeta0(m, n) = uniform(rng, -1.0, 1.0);
    }
    AdiSolver perturbed(transformed, tmesh, smesh, base.current() + zeta0);
    const double norm0 = discrete_l2_norm(zeta0, smesh);
    while (!base.finished()) {
      base.advance();
      perturbed.advance();
      const double ratio = discrete_l2_norm(perturbed.current() - base.current(), smesh) / norm0;
      result.worst_ratio = std::max(result.worst_ratio, ratio);
    }
    ++result.samples;
  }
  return result;
}

}  // namespace tfcd
