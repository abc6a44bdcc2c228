#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tfcd/caputo.hpp"
#include "tfcd/meshes.hpp"
#include "tfcd/problem.hpp"

namespace tfcd {

/// Marches the compact ADI scheme for the transformed problem
///
///   (Hx - s l1/mu dxx)(Hy - s l2/mu dyy) V^{i+1} = RHS^i,  mu = beta s + w_{i,i},
///
/// where s = sigma and RHS^i collects the Caputo history, the sigma-weighted
/// previous level, the source at t_{i+sigma}, and the factorization
/// correction (l1 l2 s^2/mu^2) dxx dyy V^i.
///
/// Each step solves My-1 tridiagonal systems along x for V* followed by Mx-1
/// systems along y for V^{i+1}. Boundary values are the exact traces of the
/// transformed boundary data.
class AdiSolver {
 public:
  /// Starts from the transformed initial data sampled at the nodes.
  AdiSolver(TransformedProblem problem, TemporalMesh tmesh, SpatialMesh smesh);

  /// Starts from an explicit initial field (e.g. perturbed data).
  AdiSolver(TransformedProblem problem, TemporalMesh tmesh, SpatialMesh smesh,
            Field2D initial);

  /// Thread hint for the per-line solves; results do not depend on it.
  void set_threads(int threads) { threads_ = threads < 1 ? 1 : threads; }

  [[nodiscard]] int level() const { return static_cast<int>(history_.size()) - 1; }
  [[nodiscard]] bool finished() const { return level() >= tmesh_.Nt(); }
  [[nodiscard]] const std::vector<Field2D>& history() const { return history_; }
  [[nodiscard]] const Field2D& current() const { return history_.back(); }
  [[nodiscard]] const TransformedProblem& problem() const { return problem_; }
  [[nodiscard]] const TemporalMesh& temporal_mesh() const { return tmesh_; }
  [[nodiscard]] const SpatialMesh& spatial_mesh() const { return smesh_; }

  /// Weights of the step from the current level to the next.
  [[nodiscard]] const WeightRow& step_weights() const { return row_; }

  /// mu = beta sigma + w_{i,i} for the step from the current level.
  [[nodiscard]] double mu() const;

  /// Interior right-hand side of the x-sweep (boundary entries are zero).
  [[nodiscard]] Field2D assemble_step_rhs() const;

  /// (V*_{0,n}, V*_{Mx,n}) from the boundary traces at t_{i+1}, 1 <= n <= My-1.
  [[nodiscard]] std::pair<double, double> vstar_boundary(int n) const;

  /// Transformed boundary data at t_{level}; interior entries are zero.
  [[nodiscard]] Field2D boundary_trace(int level) const;

  /// Transformed source sampled on all nodes at time t.
  [[nodiscard]] Field2D sample_source(double t) const;

  /// Advances one time level.
  void advance();

 private:
  void prepare_step();

  TransformedProblem problem_;
  TemporalMesh tmesh_;
  SpatialMesh smesh_;
  std::vector<Field2D> history_;
  WeightRow row_;
  int threads_ = 1;
};

struct SolveOptions {
  /// Time levels to return; empty means every level 0..Nt.
  std::vector<int> levels;
  int threads = 1;
};

/// Transform, march Nt levels, and map back: returns u at the requested levels.
std::vector<Field2D> solve(const ProblemSpec& problem, const TemporalMesh& tmesh,
                           const SpatialMesh& smesh, const SolveOptions& options = {});

/// Largest interior system the dense oracle accepts.
inline constexpr int kDenseOracleMaxUnknowns = 400;

/// Dense re-assembly of the step right-hand side from explicit 1D operator
/// matrices (no stencil code shared with the solver).
Field2D dense_step_rhs(const AdiSolver& state);

/// Next level obtained by assembling the factored operator over interior
/// unknowns as a dense matrix and solving it by LU. Throws std::length_error
/// above kDenseOracleMaxUnknowns unknowns.
Field2D direct_solve_oracle(const AdiSolver& state);

}  // namespace tfcd
