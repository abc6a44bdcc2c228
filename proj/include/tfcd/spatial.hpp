#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "tfcd/meshes.hpp"
#include "tfcd/problem.hpp"

namespace tfcd {

template <typename Derived>
using PlainMatrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Compact averaging operators (I + h^2/12 delta^2) and second differences.
// Rows index x, columns index y. Boundary lines of the compact operators are
// copied; boundary lines of the second differences are zero.

template <typename Derived>
PlainMatrix<Derived> apply_hx(const Eigen::MatrixBase<Derived>& v) {
  PlainMatrix<Derived> out = v;
  const Eigen::Index n = v.rows() - 2;
  if (n > 0) {
    out.middleRows(1, n) = (v.topRows(n) + 10 * v.middleRows(1, n) + v.bottomRows(n)) / 12;
  }
  return out;
}

template <typename Derived>
PlainMatrix<Derived> apply_hy(const Eigen::MatrixBase<Derived>& v) {
  PlainMatrix<Derived> out = v;
  const Eigen::Index n = v.cols() - 2;
  if (n > 0) {
    out.middleCols(1, n) = (v.leftCols(n) + 10 * v.middleCols(1, n) + v.rightCols(n)) / 12;
  }
  return out;
}

template <typename Derived>
PlainMatrix<Derived> apply_dxx(const Eigen::MatrixBase<Derived>& v,
                               typename Derived::Scalar hx) {
  PlainMatrix<Derived> out = PlainMatrix<Derived>::Zero(v.rows(), v.cols());
  const Eigen::Index n = v.rows() - 2;
  if (n > 0) {
    out.middleRows(1, n) = (v.topRows(n) - 2 * v.middleRows(1, n) + v.bottomRows(n)) / (hx * hx);
  }
  return out;
}

template <typename Derived>
PlainMatrix<Derived> apply_dyy(const Eigen::MatrixBase<Derived>& v,
                               typename Derived::Scalar hy) {
  PlainMatrix<Derived> out = PlainMatrix<Derived>::Zero(v.rows(), v.cols());
  const Eigen::Index n = v.cols() - 2;
  if (n > 0) {
    out.middleCols(1, n) = (v.leftCols(n) - 2 * v.middleCols(1, n) + v.rightCols(n)) / (hy * hy);
  }
  return out;
}

/// Throws std::invalid_argument unless `field` is (Mx+1) x (My+1).
void check_field_shape(const Field2D& field, const SpatialMesh& mesh);

// Mesh-checked forms.
Field2D apply_hx(const Field2D& v, const SpatialMesh& mesh);
Field2D apply_hy(const Field2D& v, const SpatialMesh& mesh);
Field2D apply_dxx(const Field2D& v, const SpatialMesh& mesh);
Field2D apply_dyy(const Field2D& v, const SpatialMesh& mesh);

class SingularPivot : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// n x n tridiagonal system; sub and sup have n-1 entries.
template <typename Scalar>
struct TridiagonalSystem {
  std::vector<Scalar> sub;
  std::vector<Scalar> diag;
  std::vector<Scalar> sup;
  std::vector<Scalar> rhs;

  [[nodiscard]] bool strictly_dominant() const {
    const std::size_t n = diag.size();
    for (std::size_t j = 0; j < n; ++j) {
      Scalar off = 0;
      if (j > 0) off += std::abs(sub[j - 1]);
      if (j + 1 < n) off += std::abs(sup[j]);
      if (!(std::abs(diag[j]) > off)) return false;
    }
    return true;
  }
};

/// Forward-elimination factors of a tridiagonal matrix (no pivoting). One
/// factorization serves any number of right-hand sides.
template <typename Scalar>
class TridiagonalFactorization {
 public:
  TridiagonalFactorization(std::span<const Scalar> sub, std::span<const Scalar> diag,
                           std::span<const Scalar> sup)
      : sub_(sub.begin(), sub.end()), inv_pivot_(diag.size()), upper_(diag.size(), Scalar(0)) {
    const std::size_t n = diag.size();
    if (n == 0) throw std::invalid_argument("empty tridiagonal system");
    if (sub.size() + 1 != n || sup.size() + 1 != n) {
      throw std::invalid_argument("tridiagonal band sizes do not match the diagonal");
    }
    Scalar scale = 0;
    for (std::size_t j = 0; j < n; ++j) {
      Scalar row = std::abs(diag[j]);
      if (j > 0) row += std::abs(sub[j - 1]);
      if (j + 1 < n) row += std::abs(sup[j]);
      scale = std::max(scale, row);
    }
    const Scalar tiny = scale * std::numeric_limits<Scalar>::epsilon() * Scalar(n);
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar pivot = j == 0 ? diag[0] : diag[j] - sub[j - 1] * upper_[j - 1];
      if (!(std::abs(pivot) > tiny)) {
        std::ostringstream msg;
        msg << "near-zero pivot " << pivot << " at row " << j
            << " (system is not diagonally dominant)";
        throw SingularPivot(msg.str());
      }
      inv_pivot_[j] = Scalar(1) / pivot;
      if (j + 1 < n) upper_[j] = sup[j] * inv_pivot_[j];
    }
  }

  [[nodiscard]] std::size_t size() const { return inv_pivot_.size(); }

  /// Overwrites `x` (the right-hand side) with the solution. `x` may be strided.
  template <typename Vector>
  void solve_in_place(Vector&& x) const {
    const std::size_t n = size();
    x[0] *= inv_pivot_[0];
    for (std::size_t j = 1; j < n; ++j) x[j] = (x[j] - sub_[j - 1] * x[j - 1]) * inv_pivot_[j];
    for (std::size_t j = n - 1; j-- > 0;) x[j] -= upper_[j] * x[j + 1];
  }

 private:
  std::vector<Scalar> sub_;
  std::vector<Scalar> inv_pivot_;
  std::vector<Scalar> upper_;
};

template <typename Scalar>
std::vector<Scalar> solve_tridiagonal(const TridiagonalSystem<Scalar>& system) {
  if (system.rhs.size() != system.diag.size()) {
    throw std::invalid_argument("right-hand side size does not match the matrix");
  }
  const TridiagonalFactorization<Scalar> lu(system.sub, system.diag, system.sup);
  std::vector<Scalar> x = system.rhs;
  lu.solve_in_place(x);
  return x;
}

}  // namespace tfcd
