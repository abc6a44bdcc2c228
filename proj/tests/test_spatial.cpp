#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tfcd/spatial.hpp"

using namespace tfcd;

namespace {

Field2D sample(const SpatialMesh& mesh, double (*f)(double, double)) {
  Field2D v(mesh.Mx + 1, mesh.My + 1);
  for (int m = 0; m <= mesh.Mx; ++m) {
    for (int n = 0; n <= mesh.My; ++n) v(m, n) = f(mesh.x(m), mesh.y(n));
  }
  return v;
}

}  // namespace

TEST_CASE("compact operator on polynomials") {
  const SpatialMesh mesh = make_spatial_mesh(1.0, 8, 6);
  const Field2D c = Field2D::Constant(9, 7, 2.5);
  CHECK((apply_hx(c, mesh) - c).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((apply_hy(c, mesh) - c).cwiseAbs().maxCoeff() < 1e-15);

  const Field2D lin = sample(mesh, [](double x, double) { return x; });
  CHECK((apply_hx(lin, mesh) - lin).cwiseAbs().maxCoeff() < 1e-15);

  const Field2D sq = sample(mesh, [](double x, double) { return x * x; });
  const Field2D hsq = apply_hx(sq, mesh);
  const double h2 = mesh.hx() * mesh.hx();
  for (int n = 0; n <= mesh.My; ++n) {
    CHECK(hsq(0, n) == sq(0, n));
    CHECK(hsq(mesh.Mx, n) == sq(mesh.Mx, n));
    for (int m = 1; m < mesh.Mx; ++m) CHECK(hsq(m, n) == doctest::Approx(sq(m, n) + h2 / 6));
  }
}

TEST_CASE("second differences") {
  const SpatialMesh mesh = make_spatial_mesh(1.0, 8, 10);
  const Field2D lin = sample(mesh, [](double x, double y) { return 3 * x - y; });
  CHECK(apply_dxx(lin, mesh).cwiseAbs().maxCoeff() < 1e-11);
  CHECK(apply_dyy(lin, mesh).cwiseAbs().maxCoeff() < 1e-11);

  const Field2D sq = sample(mesh, [](double, double y) { return y * y; });
  const Field2D d = apply_dyy(sq, mesh);
  for (int m = 0; m <= mesh.Mx; ++m) {
    CHECK(d(m, 0) == 0.0);
    for (int n = 1; n < mesh.My; ++n) CHECK(d(m, n) == doctest::Approx(2.0).epsilon(1e-10));
  }

  const SpatialMesh fine = make_spatial_mesh(1.0, 32, 2);
  const Field2D s = sample(fine, [](double x, double) { return std::sin(std::numbers::pi * x); });
  const Field2D ds = apply_dxx(s, fine);
  const double k2 = std::numbers::pi * std::numbers::pi;
  for (int m = 1; m < 32; ++m) {
    CHECK(std::abs(ds(m, 1) + k2 * s(m, 1)) <= k2 * k2 * fine.hx() * fine.hx() / 12 * 1.01);
  }
}

TEST_CASE("directional operators commute") {
  const SpatialMesh mesh = make_spatial_mesh(2.0, 7, 9);
  const Field2D v = Field2D::Random(8, 10);
  CHECK((apply_hx(apply_hy(v)) - apply_hy(apply_hx(v))).cwiseAbs().maxCoeff() < 1e-14);
  const Field2D a = apply_dxx(apply_dyy(v, mesh.hy()), mesh.hx());
  const Field2D b = apply_dyy(apply_dxx(v, mesh.hx()), mesh.hy());
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-10 * a.cwiseAbs().maxCoeff());
}

TEST_CASE("shape checks") {
  const SpatialMesh mesh = make_spatial_mesh(1.0, 4, 4);
  CHECK_THROWS_AS(apply_hx(Field2D::Zero(4, 5), mesh), std::invalid_argument);
  CHECK_THROWS_AS(apply_dyy(Field2D::Zero(5, 4), mesh), std::invalid_argument);
}

TEST_CASE("tridiagonal solver") {
  TridiagonalSystem<double> identity{{0, 0}, {1, 1, 1}, {0, 0}, {3, -1, 2}};
  CHECK(solve_tridiagonal(identity) == std::vector<double>{3, -1, 2});

  TridiagonalSystem<double> small{{-1, -1}, {4, 4, 4}, {-1, -1}, {1, 0, 1}};
  CHECK(small.strictly_dominant());
  Eigen::Matrix3d A;
  A << 4, -1, 0, -1, 4, -1, 0, -1, 4;
  const Eigen::Vector3d ref = A.partialPivLu().solve(Eigen::Vector3d(1, 0, 1));
  const auto x = solve_tridiagonal(small);
  for (int j = 0; j < 3; ++j) CHECK(std::abs(x[j] - ref[j]) <= 1e-14);
}

TEST_CASE("random dominant systems") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 100;
    TridiagonalSystem<double> s;
    for (int j = 0; j < n; ++j) {
      if (j + 1 < n) {
        s.sub.push_back(u(rng));
        s.sup.push_back(u(rng));
      }
      s.rhs.push_back(u(rng));
    }
    for (int j = 0; j < n; ++j) {
      double off = 0;
      if (j > 0) off += std::abs(s.sub[j - 1]);
      if (j + 1 < n) off += std::abs(s.sup[j]);
      s.diag.push_back((off + 0.1 + std::abs(u(rng))) * (u(rng) < 0 ? -1 : 1));
    }
    REQUIRE(s.strictly_dominant());
    const auto x = solve_tridiagonal(s);
    double worst = 0.0;
    double scale = 0.0;
    for (int j = 0; j < n; ++j) {
      double r = s.diag[j] * x[j] - s.rhs[j];
      if (j > 0) r += s.sub[j - 1] * x[j - 1];
      if (j + 1 < n) r += s.sup[j] * x[j + 1];
      worst = std::max(worst, std::abs(r));
      scale = std::max(scale, std::abs(s.diag[j] * x[j]) + std::abs(s.rhs[j]));
    }
    CHECK(worst <= 1e-12 * scale);
  }
}

TEST_CASE("factorization solves strided right-hand sides") {
  const std::vector<double> off{-1, -1, -1};
  const std::vector<double> diag{3, 3, 3, 3};
  const TridiagonalFactorization<double> lu(off, diag, off);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Random(4, 3);
  Eigen::Matrix4d A = Eigen::Matrix4d::Zero();
  for (int j = 0; j < 4; ++j) {
    A(j, j) = 3;
    if (j > 0) A(j, j - 1) = A(j - 1, j) = -1;
  }
  const Eigen::MatrixXd ref = A.partialPivLu().solve(rhs);
  Eigen::MatrixXd t = rhs.transpose();
  for (int c = 0; c < 3; ++c) lu.solve_in_place(t.row(c));
  CHECK((t.transpose() - ref).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("zero pivot is reported") {
  TridiagonalSystem<double> s{{1}, {1, 1}, {1}, {1, 1}};
  CHECK_THROWS_AS(solve_tridiagonal(s), SingularPivot);
  TridiagonalSystem<double> bad{{1}, {1}, {1}, {1}};
  CHECK_THROWS_AS(solve_tridiagonal(bad), std::invalid_argument);
}
