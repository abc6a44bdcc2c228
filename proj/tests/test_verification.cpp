#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "oracles/quadrature.hpp"
#include "tfcd/verification.hpp"

using namespace tfcd;

namespace {

// Fourth-order central differences of g(x) with step h.
template <typename G>
double d1(G g, double x, double h) {
  return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

template <typename G>
double d2(G g, double x, double h) {
  return (-g(x + 2 * h) + 16 * g(x + h) - 30 * g(x) + 16 * g(x - h) - g(x - 2 * h)) / (12 * h * h);
}

// Caputo term by quadrature minus the right-hand side with finite-difference
// spatial derivatives.
double residual(const ManufacturedProblem& p, double x, double y, double t) {
  const ProblemSpec& s = p.spec;
  const double h = 2e-3;
  auto ux = [&](double z) { return p.exact_u(z, y, t); };
  auto uy = [&](double z) { return p.exact_u(x, z, t); };
  // u = T(t) S(x, y) with T(1) - T(0) = 1 for both time-dependent entries.
  const double S = p.exact_u(x, y, 1.0) - p.exact_u(x, y, 0.0);
  double caputo = 0.0;
  if (p.name == "singular") {
    caputo = oracle::caputo_quadrature(
        [&](double r) { return s.alpha * std::pow(r, s.alpha - 1.0); }, t, s.alpha) * S;
  } else if (p.name == "smooth") {
    caputo = oracle::caputo_quadrature([](double r) { return 2.0 * r; }, t, s.alpha) * S;
  }
  const double rhs = s.lambda1 * d2(ux, x, h) + s.lambda2 * d2(uy, y, h) + s.mu1 * d1(ux, x, h) +
                     s.mu2 * d1(uy, y, h) + s.gamma * p.exact_u(x, y, t) + s.f(x, y, t);
  return caputo - rhs;
}

}  // namespace

TEST_CASE("manufactured sources leave no residual") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const std::string& name : {"singular", "smooth", "steady", "zero"}) {
    Coefficients c;
    c.lambda1 = 0.5 + u(rng);
    c.lambda2 = 0.5 + u(rng);
    c.mu1 = 2 * u(rng) - 1;
    c.mu2 = 2 * u(rng) - 1;
    c.gamma = -u(rng);
    const double alpha = 0.1 + 0.8 * u(rng);
    const ManufacturedProblem p = make_manufactured(name, alpha, 1.0, 1.0, c);
    double worst = 0.0;
    for (int j = 0; j < 100; ++j) {
      const double x = 0.05 + 0.9 * u(rng);
      const double y = 0.05 + 0.9 * u(rng);
      const double t = 0.01 + 0.99 * u(rng);
      worst = std::max(worst, std::abs(residual(p, x, y, t)));
    }
    INFO(name);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("catalogue entries") {
  const ManufacturedProblem sing = manufactured_singular(0.5, 1.0, 1.0);
  CHECK(sing.singular);
  CHECK(sing.exact_caputo(0.3, 0.4, 0.7) ==
        doctest::Approx(std::tgamma(1.5) * std::sin(0.3 * M_PI) * std::sin(0.4 * M_PI)));
  CHECK(sing.spec.phi(0.5, 0.5) == doctest::Approx(1.0));
  CHECK(sing.spec.psi(0.0, 0.3, 0.5) == 0.0);

  const ManufacturedProblem smooth = manufactured_smooth(0.5, 1.0, 1.0);
  CHECK_FALSE(smooth.singular);
  CHECK(smooth.exact_caputo(0.5, 0.5, 1.0) == doctest::Approx(1.504506).epsilon(1e-6));
  CHECK(oracle::caputo_quadrature([](double r) { return 2 * r; }, 1.0, 0.5) ==
        doctest::Approx(2.0 / std::tgamma(2.5)).epsilon(1e-10));
  CHECK(oracle::caputo_quadrature([](double r) { return 0.5 / std::sqrt(r); }, 0.8, 0.5) ==
        doctest::Approx(std::tgamma(1.5)).epsilon(1e-10));

  CHECK_THROWS_AS(make_manufactured("bogus", 0.5, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(manufactured_singular(0.5, 1.0, 1.0, Coefficients{1, 1, 0, 0, 1}),
                  InvalidProblem);
}

TEST_CASE("error norms") {
  const SpatialMesh mesh = make_spatial_mesh(1.0, 6, 8);
  const SpaceTimeFunction zero = [](double, double, double) { return 0.0; };
  const SpaceTimeFunction bump = [](double x, double y, double t) { return x * y + t; };

  Field2D exact(7, 9);
  for (int m = 0; m <= 6; ++m) {
    for (int n = 0; n <= 8; ++n) exact(m, n) = bump(mesh.x(m), mesh.y(n), 0.3);
  }
  const ErrorNorms none = error_norms(exact, bump, 0.3, mesh);
  CHECK(none.l2 == 0.0);
  CHECK(none.max == 0.0);

  Field2D c = Field2D::Zero(7, 9);
  c.block(1, 1, 5, 7).setConstant(0.25);
  CHECK(error_norms(c, zero, 0.0, mesh).l2 ==
        doctest::Approx(0.25 * std::sqrt(5 * 7 * mesh.hx() * mesh.hy())));

  const Field2D r = Field2D::Random(7, 9);
  double sum = 0.0;
  for (int m = 1; m < 6; ++m) {
    for (int n = 1; n < 8; ++n) sum += mesh.hx() * mesh.hy() * r(m, n) * r(m, n);
  }
  const ErrorNorms e = error_norms(r, zero, 0.0, mesh);
  CHECK(std::abs(e.l2 - std::sqrt(sum)) <= 1e-13 * std::sqrt(sum));
  CHECK(e.max == r.cwiseAbs().maxCoeff());

  // Relabelling nodes by reversing both axes leaves the norms unchanged.
  const Field2D flipped = r.colwise().reverse().rowwise().reverse();
  const ErrorNorms ef = error_norms(flipped, zero, 0.0, mesh);
  CHECK(ef.l2 == doctest::Approx(e.l2).epsilon(1e-14));
  CHECK(ef.max == e.max);
}

TEST_CASE("predicted temporal order") {
  CHECK(predicted_temporal_order(0.5, 4.0) == doctest::Approx(2.0));
  CHECK(predicted_temporal_order(0.5, 2.0) == doctest::Approx(1.0));
  CHECK(predicted_temporal_order(0.8, 2.75) == doctest::Approx(2.2));
  CHECK(predicted_temporal_order(0.2, 20.0) == doctest::Approx(1.4));
  CHECK_THROWS(predicted_temporal_order(1.0, 2.0));
  CHECK_THROWS(predicted_temporal_order(0.5, 0.5));
}

TEST_CASE("axis names") {
  CHECK(parse_axis("spatial") == Axis::spatial);
  CHECK(to_string(Axis::temporal) == "temporal");
  CHECK_THROWS_AS(parse_axis("time"), std::invalid_argument);
}

TEST_CASE("spatial refinement of the steady problem is fourth order") {
  const ManufacturedProblem p = manufactured_steady(0.5, 1.0, 1.0);
  StudyParams params;
  params.levels = {4, 8, 16};
  params.Nt = 16;
  params.theta = 1.0;
  const ConvergenceReport report = convergence_study(p, Axis::spatial, params);
  REQUIRE(report.rows.size() == 3);
  CHECK(report.predicted_order == 4.0);
  CHECK(std::isnan(report.rows[0].observed_order));
  CHECK(report.finest_order() == doctest::Approx(4.0).epsilon(0.05));
  CHECK(report.warnings.empty());
}

TEST_CASE("temporal refinement reduces the error") {
  const ManufacturedProblem p = manufactured_singular(0.5, 1.0, 1.0);
  StudyParams params;
  params.levels = {8, 16, 32};
  params.M = 16;
  const ConvergenceReport report = convergence_study(p, Axis::temporal, params);
  CHECK(report.predicted_order == 2.0);
  for (std::size_t j = 1; j < report.rows.size(); ++j) {
    CHECK(report.rows[j].l2_error < report.rows[j - 1].l2_error);
    CHECK(report.rows[j].observed_order > 0.0);
  }
}

TEST_CASE("subdominance warning") {
  // With Nt = 4 the temporal error swamps a spatial study.
  const ManufacturedProblem p = manufactured_singular(0.5, 1.0, 1.0);
  StudyParams params;
  params.levels = {8, 16};
  params.Nt = 4;
  const ConvergenceReport report = convergence_study(p, Axis::spatial, params);
  REQUIRE(report.warnings.size() == 1);
  CHECK(report.warnings[0].find("Nt is doubled") != std::string::npos);
}

TEST_CASE("report CSV") {
  ConvergenceReport report;
  report.axis = Axis::spatial;
  report.predicted_order = 4.0;
  report.rows.push_back({4, 0.1, 0.2, std::nan("")});
  report.rows.push_back({8, 1.0 / 3.0, 0.05, 2.0});
  std::ostringstream out;
  write_report_csv(out, report);
  CHECK(out.str() ==
        "level,param,l2_error,max_error,observed_order,predicted_order\n"
        "0,4,0.10000000000000001,0.20000000000000001,,4\n"
        "1,8,0.33333333333333331,0.050000000000000003,2,4\n");

  StudyParams bad;
  bad.levels = {8, 4};
  CHECK_THROWS_AS(convergence_study(manufactured_zero(0.5, 1.0, 1.0), Axis::temporal, bad),
                  std::invalid_argument);
}
