#include "tfcd/adi_solver.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "tfcd/spatial.hpp"

namespace tfcd {

namespace {

// Neumaier-compensated accumulation of c * field into (sum, carry).
void accumulate(Field2D& sum, Field2D& carry, double c, const Field2D& field) {
  const Eigen::Index size = sum.size();
  double* s = sum.data();
  double* e = carry.data();
  const double* f = field.data();
  for (Eigen::Index j = 0; j < size; ++j) {
    const double x = c * f[j];
    const double t = s[j] + x;
    e[j] += std::abs(s[j]) >= std::abs(x) ? (s[j] - t) + x : (x - t) + s[j];
    s[j] = t;
  }
}

}  // namespace

AdiSolver::AdiSolver(TransformedProblem problem, TemporalMesh tmesh, SpatialMesh smesh)
    : problem_(std::move(problem)), tmesh_(std::move(tmesh)), smesh_(smesh) {
  Field2D initial(smesh_.Mx + 1, smesh_.My + 1);
  for (int n = 0; n <= smesh_.My; ++n) {
    for (int m = 0; m <= smesh_.Mx; ++m) {
      initial(m, n) = problem_.phi_tilde(smesh_.x(m), smesh_.y(n));
    }
  }
  history_.push_back(std::move(initial));
  prepare_step();
}

AdiSolver::AdiSolver(TransformedProblem problem, TemporalMesh tmesh, SpatialMesh smesh,
                     Field2D initial)
    : problem_(std::move(problem)), tmesh_(std::move(tmesh)), smesh_(smesh) {
  check_field_shape(initial, smesh_);
  history_.push_back(std::move(initial));
  prepare_step();
}

void AdiSolver::prepare_step() {
  if (!finished()) row_ = weight_row(tmesh_, level());
}

double AdiSolver::mu() const { return problem_.beta() * tmesh_.sigma() + row_.diagonal(); }

Field2D AdiSolver::sample_source(double t) const {
  Field2D f(smesh_.Mx + 1, smesh_.My + 1);
  for (int n = 0; n <= smesh_.My; ++n) {
    for (int m = 0; m <= smesh_.Mx; ++m) f(m, n) = problem_.F(smesh_.x(m), smesh_.y(n), t);
  }
  return f;
}

Field2D AdiSolver::boundary_trace(int level) const {
  const double t = tmesh_.t(level);
  Field2D b = Field2D::Zero(smesh_.Mx + 1, smesh_.My + 1);
  for (int m = 0; m <= smesh_.Mx; ++m) {
    b(m, 0) = problem_.psi_tilde(smesh_.x(m), smesh_.y(0), t);
    b(m, smesh_.My) = problem_.psi_tilde(smesh_.x(m), smesh_.y(smesh_.My), t);
  }
  for (int n = 1; n < smesh_.My; ++n) {
    b(0, n) = problem_.psi_tilde(smesh_.x(0), smesh_.y(n), t);
    b(smesh_.Mx, n) = problem_.psi_tilde(smesh_.x(smesh_.Mx), smesh_.y(n), t);
  }
  return b;
}

Field2D AdiSolver::assemble_step_rhs() const {
  if (finished()) throw std::logic_error("solver already reached the final time level");
  const int i = level();
  const double sigma = tmesh_.sigma();
  const double beta = problem_.beta();
  const double l1 = problem_.lambda1();
  const double l2 = problem_.lambda2();
  const double mu_i = mu();
  const double hx = smesh_.hx();
  const double hy = smesh_.hy();

  // w_{i,0} V^0 + sum_{k=1}^{i} (w_{i,k} - w_{i,k-1}) V^k, ascending k.
  Field2D sum = Field2D::Zero(smesh_.Mx + 1, smesh_.My + 1);
  Field2D carry = Field2D::Zero(smesh_.Mx + 1, smesh_.My + 1);
  accumulate(sum, carry, row_[0], history_[0]);
  for (int k = 1; k <= i; ++k) accumulate(sum, carry, row_[k] - row_[k - 1], history_[k]);
  sum += carry;

  const Field2D& vi = history_[static_cast<std::size_t>(i)];
  const Field2D source = sample_source(t_sigma(tmesh_, i));

  const Field2D hh_history = apply_hy(apply_hx(sum));
  const Field2D hh_current = apply_hy(apply_hx(vi));
  const Field2D hh_source = apply_hy(apply_hx(source));
  const Field2D hy_dxx = apply_hy(apply_dxx(vi, hx));
  const Field2D hx_dyy = apply_hx(apply_dyy(vi, hy));
  const Field2D dxx_dyy = apply_dxx(apply_dyy(vi, hy), hx);

  Field2D rhs = (hh_history - beta * (1.0 - sigma) * hh_current +
                 (1.0 - sigma) * (l1 * hy_dxx + l2 * hx_dyy) + hh_source) /
                    mu_i +
                (l1 * l2 * sigma * sigma / (mu_i * mu_i)) * dxx_dyy;
  rhs.row(0).setZero();
  rhs.row(smesh_.Mx).setZero();
  rhs.col(0).setZero();
  rhs.col(smesh_.My).setZero();
  return rhs;
}

std::pair<double, double> AdiSolver::vstar_boundary(int n) const {
  if (n < 1 || n > smesh_.My - 1) throw std::out_of_range("vstar_boundary needs 1 <= n <= My-1");
  const int next = level() + 1;
  const double t = tmesh_.t(next);
  const double ay = tmesh_.sigma() * problem_.lambda2() / (mu() * smesh_.hy() * smesh_.hy());
  auto apply_along_y = [&](double x) {
    const double below = problem_.psi_tilde(x, smesh_.y(n - 1), t);
    const double here = problem_.psi_tilde(x, smesh_.y(n), t);
    const double above = problem_.psi_tilde(x, smesh_.y(n + 1), t);
    return (1.0 / 12.0 - ay) * (below + above) + (10.0 / 12.0 + 2.0 * ay) * here;
  };
  return {apply_along_y(smesh_.x(0)), apply_along_y(smesh_.x(smesh_.Mx))};
}

void AdiSolver::advance() {
  if (finished()) throw std::logic_error("solver already reached the final time level");
  const int next = level() + 1;
  const int mx = smesh_.Mx;
  const int my = smesh_.My;
  const double mu_i = mu();
  const double ax = tmesh_.sigma() * problem_.lambda1() / (mu_i * smesh_.hx() * smesh_.hx());
  const double ay = tmesh_.sigma() * problem_.lambda2() / (mu_i * smesh_.hy() * smesh_.hy());

  const Field2D rhs = assemble_step_rhs();
  const Field2D boundary = boundary_trace(next);

  // Both factors have rows (1/12 - a, 10/12 + 2a, 1/12 - a), strictly dominant for a > 0.
  auto factor = [](int size, double a) {
    const std::vector<double> off(static_cast<std::size_t>(size - 1), 1.0 / 12.0 - a);
    const std::vector<double> diag(static_cast<std::size_t>(size), 10.0 / 12.0 + 2.0 * a);
    return TridiagonalFactorization<double>(off, diag, off);
  };
  const auto x_factor = factor(mx - 1, ax);
  const auto y_factor = factor(my - 1, ay);
  const double x_off = 1.0 / 12.0 - ax;
  const double y_off = 1.0 / 12.0 - ay;

  // Step (i): one x-line per interior n.
  Field2D vstar = Field2D::Zero(mx + 1, my + 1);
#pragma omp parallel for num_threads(threads_) if (threads_ > 1) schedule(static)
  for (int n = 1; n < my; ++n) {
    const auto [left, right] = vstar_boundary(n);
    vstar(0, n) = left;
    vstar(mx, n) = right;
    auto line = vstar.col(n).segment(1, mx - 1);
    line = rhs.col(n).segment(1, mx - 1);
    line[0] -= x_off * left;
    line[mx - 2] -= x_off * right;
    x_factor.solve_in_place(line);
  }

  // Step (ii): one y-line per interior m.
  Field2D v = boundary;
#pragma omp parallel for num_threads(threads_) if (threads_ > 1) schedule(static)
  for (int m = 1; m < mx; ++m) {
    auto line = v.row(m).segment(1, my - 1);
    line = vstar.row(m).segment(1, my - 1);
    line[0] -= y_off * boundary(m, 0);
    line[my - 2] -= y_off * boundary(m, my);
    y_factor.solve_in_place(line);
  }

  history_.push_back(std::move(v));
  prepare_step();
}

std::vector<Field2D> solve(const ProblemSpec& problem, const TemporalMesh& tmesh,
                           const SpatialMesh& smesh, const SolveOptions& options) {
  TransformedProblem transformed = transform(problem);
  if (std::abs(tmesh.alpha() - problem.alpha) > 0.0) {
    throw std::invalid_argument("temporal mesh was built for a different alpha");
  }
  if (std::abs(tmesh.Tf() - problem.Tf) > 1e-12 * problem.Tf) {
    throw std::invalid_argument("temporal mesh does not end at the problem's final time");
  }
  if (std::abs(smesh.L - problem.L) > 1e-12 * problem.L) {
    throw std::invalid_argument("spatial mesh does not match the problem's domain length");
  }
  std::vector<int> levels = options.levels;
  if (levels.empty()) {
    for (int i = 0; i <= tmesh.Nt(); ++i) levels.push_back(i);
  }
  for (int level : levels) {
    if (level < 0 || level > tmesh.Nt()) {
      std::ostringstream msg;
      msg << "requested level " << level << " outside [0, " << tmesh.Nt() << "]";
      throw std::out_of_range(msg.str());
    }
  }

  AdiSolver solver(transformed, tmesh, smesh);
  solver.set_threads(options.threads);
  while (!solver.finished()) solver.advance();

  std::vector<Field2D> out;
  out.reserve(levels.size());
  for (int level : levels) {
    out.push_back(inverse_transform(solver.history()[static_cast<std::size_t>(level)], smesh,
                                    solver.problem()));
  }
  return out;
}

namespace {

// 1D operator matrices on nodes 0..M. Boundary rows of H are identity rows and
// boundary rows of the second difference are zero.
Eigen::MatrixXd compact_matrix(int M) {
  Eigen::MatrixXd H = Eigen::MatrixXd::Zero(M + 1, M + 1);
  H(0, 0) = 1.0;
  H(M, M) = 1.0;
  for (int j = 1; j < M; ++j) {
    H(j, j - 1) = 1.0 / 12.0;
    H(j, j) = 10.0 / 12.0;
    H(j, j + 1) = 1.0 / 12.0;
  }
  return H;
}

Eigen::MatrixXd second_difference_matrix(int M, double h) {
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(M + 1, M + 1);
  for (int j = 1; j < M; ++j) {
    D(j, j - 1) = 1.0 / (h * h);
    D(j, j) = -2.0 / (h * h);
    D(j, j + 1) = 1.0 / (h * h);
  }
  return D;
}

}  // namespace

namespace {

using FieldL = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

// The dense oracle runs in extended precision so that its own round-off sits
// well below what the comparison against the ADI sweep resolves.
FieldL dense_step_rhs_extended(const AdiSolver& state) {
  const SpatialMesh& mesh = state.spatial_mesh();
  const TemporalMesh& tmesh = state.temporal_mesh();
  const TransformedProblem& problem = state.problem();
  const WeightRow& w = state.step_weights();
  const int i = state.level();
  const long double sigma = tmesh.sigma();
  const long double beta = problem.beta();
  const long double l1 = problem.lambda1();
  const long double l2 = problem.lambda2();
  const long double mu = beta * sigma + static_cast<long double>(w.diagonal());

  const FieldL Hx = compact_matrix(mesh.Mx).cast<long double>();
  const FieldL Hy = compact_matrix(mesh.My).cast<long double>();
  const long double hx2 = static_cast<long double>(mesh.hx()) * mesh.hx();
  const long double hy2 = static_cast<long double>(mesh.hy()) * mesh.hy();
  const FieldL Dx = (second_difference_matrix(mesh.Mx, 1.0).cast<long double>()) / hx2;
  const FieldL Dy = (second_difference_matrix(mesh.My, 1.0).cast<long double>()) / hy2;
  auto hh = [&](const FieldL& v) -> FieldL { return Hx * v * Hy.transpose(); };

  const auto& history = state.history();
  FieldL result = (static_cast<long double>(w[0]) / mu) * hh(history[0].cast<long double>());
  for (int k = 1; k <= i; ++k) {
    const long double dw = static_cast<long double>(w[k]) - w[k - 1];
    result += (dw / mu) * hh(history[static_cast<std::size_t>(k)].cast<long double>());
  }

  const FieldL vi = history[static_cast<std::size_t>(i)].cast<long double>();
  const double ts = tmesh.t(i) + tmesh.sigma() * tmesh.tau(i + 1);
  FieldL source(mesh.Mx + 1, mesh.My + 1);
  for (int m = 0; m <= mesh.Mx; ++m) {
    for (int n = 0; n <= mesh.My; ++n) source(m, n) = problem.F(mesh.x(m), mesh.y(n), ts);
  }
  result -= (beta * (1.0L - sigma) / mu) * hh(vi);
  result += ((1.0L - sigma) / mu) * (l1 * Dx * vi * Hy.transpose() + l2 * Hx * vi * Dy.transpose());
  result += (1.0L / mu) * hh(source);
  result += (l1 * l2 * sigma * sigma / (mu * mu)) * (Dx * vi * Dy.transpose());

  FieldL interior = FieldL::Zero(mesh.Mx + 1, mesh.My + 1);
  interior.block(1, 1, mesh.Mx - 1, mesh.My - 1) = result.block(1, 1, mesh.Mx - 1, mesh.My - 1);
  return interior;
}

}  // namespace

Field2D dense_step_rhs(const AdiSolver& state) {
  return dense_step_rhs_extended(state).cast<double>();
}

Field2D direct_solve_oracle(const AdiSolver& state) {
  const SpatialMesh& mesh = state.spatial_mesh();
  const int unknowns = mesh.interior_count();
  if (unknowns > kDenseOracleMaxUnknowns) {
    std::ostringstream msg;
    msg << "dense oracle limited to " << kDenseOracleMaxUnknowns << " interior unknowns, got "
        << unknowns;
    throw std::length_error(msg.str());
  }
  if (state.finished()) throw std::logic_error("solver already reached the final time level");

  const TemporalMesh& tmesh = state.temporal_mesh();
  const TransformedProblem& problem = state.problem();
  const long double sigma = tmesh.sigma();
  const long double mu = static_cast<long double>(problem.beta()) * sigma +
                         static_cast<long double>(state.step_weights().diagonal());
  const long double cx = sigma * problem.lambda1() / mu;
  const long double cy = sigma * problem.lambda2() / mu;
  const long double hx2 = static_cast<long double>(mesh.hx()) * mesh.hx();
  const long double hy2 = static_cast<long double>(mesh.hy()) * mesh.hy();

  const FieldL Ax = compact_matrix(mesh.Mx).cast<long double>() -
                    (cx / hx2) * second_difference_matrix(mesh.Mx, 1.0).cast<long double>();
  const FieldL Ay = compact_matrix(mesh.My).cast<long double>() -
                    (cy / hy2) * second_difference_matrix(mesh.My, 1.0).cast<long double>();

  const FieldL rhs = dense_step_rhs_extended(state);
  const double t_next = tmesh.t(state.level() + 1);
  FieldL next = FieldL::Zero(mesh.Mx + 1, mesh.My + 1);
  for (int m = 0; m <= mesh.Mx; ++m) {
    for (int n = 0; n <= mesh.My; ++n) {
      if (m == 0 || n == 0 || m == mesh.Mx || n == mesh.My) {
        next(m, n) = problem.psi_tilde(mesh.x(m), mesh.y(n), t_next);
      }
    }
  }

  const int ny = mesh.My - 1;
  auto index = [ny](int m, int n) { return (m - 1) * ny + (n - 1); };
  FieldL A = FieldL::Zero(unknowns, unknowns);
  Eigen::Matrix<long double, Eigen::Dynamic, 1> b(unknowns);
  for (int m = 1; m < mesh.Mx; ++m) {
    for (int n = 1; n < mesh.My; ++n) {
      const int row = index(m, n);
      long double value = rhs(m, n);
      for (int mm = 0; mm <= mesh.Mx; ++mm) {
        for (int nn = 0; nn <= mesh.My; ++nn) {
          const long double a = Ax(m, mm) * Ay(n, nn);
          if (a == 0.0L) continue;
          const bool on_boundary = mm == 0 || nn == 0 || mm == mesh.Mx || nn == mesh.My;
          if (on_boundary) {
            value -= a * next(mm, nn);
          } else {
            A(row, index(mm, nn)) = a;
          }
        }
      }
      b[row] = value;
    }
  }
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> x = A.partialPivLu().solve(b);
  for (int m = 1; m < mesh.Mx; ++m) {
    for (int n = 1; n < mesh.My; ++n) next(m, n) = x[index(m, n)];
  }
  return next.cast<double>();
}

}  // namespace tfcd
