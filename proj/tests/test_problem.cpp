#include <doctest.h>

#include <cmath>
#include <random>
#include <string>

#include "tfcd/meshes.hpp"
#include "tfcd/problem.hpp"

using namespace tfcd;

namespace {

ProblemSpec with_data(ProblemSpec spec) {
  spec.f = [](double, double, double) { return 1.0; };
  spec.phi = [](double x, double y) { return x + y; };
  spec.psi = [](double x, double y, double t) { return x * y + t; };
  return spec;
}

std::string rejection(const ProblemSpec& spec) {
  try {
    validate_spec(spec);
  } catch (const InvalidProblem& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("validation accepts beta = 0 and rejects broken invariants") {
  ProblemSpec ok = with_data({});
  CHECK(rejection(ok).empty());
  CHECK(ok.beta() == 0.0);

  ProblemSpec negative_beta = ok;
  negative_beta.mu1 = 2.0;
  negative_beta.gamma = 2.0;
  CHECK(negative_beta.beta() == doctest::Approx(-1.0));
  CHECK(rejection(negative_beta).find("nonnegative") != std::string::npos);

  ProblemSpec no_diffusion = ok;
  no_diffusion.lambda1 = 0.0;
  CHECK(rejection(no_diffusion).find("positive") != std::string::npos);

  ProblemSpec bad_alpha = ok;
  bad_alpha.alpha = 1.0;
  CHECK(rejection(bad_alpha).find("alpha must lie in (0,1)") != std::string::npos);

  ProblemSpec missing = ok;
  missing.psi = nullptr;
  CHECK_FALSE(rejection(missing).empty());

  ProblemSpec bad_domain = ok;
  bad_domain.L = -1.0;
  CHECK_FALSE(rejection(bad_domain).empty());
}

TEST_CASE("transform without convection is the identity") {
  ProblemSpec spec = with_data({});
  spec.gamma = -0.3;
  const TransformedProblem p(spec);
  CHECK(p.beta() == doctest::Approx(0.3));
  CHECK(p.P(0.7) == 1.0);
  CHECK(p.Q(0.2) == 1.0);
  CHECK(p.F(0.1, 0.2, 0.3) == 1.0);
  CHECK(p.phi_tilde(0.1, 0.2) == doctest::Approx(0.3));

  const SpatialMesh mesh = make_spatial_mesh(1.0, 5, 7);
  const Field2D v = Field2D::Random(6, 8);
  CHECK(inverse_transform(v, mesh, p) == v);
}

TEST_CASE("transform factors for mu1 = mu2 = 2") {
  ProblemSpec spec = with_data({});
  spec.mu1 = 2.0;
  spec.mu2 = 2.0;
  const TransformedProblem p(spec);
  CHECK(p.beta() == doctest::Approx(2.0));
  CHECK(p.P(0.5) == doctest::Approx(std::exp(0.5)));
  CHECK(p.Q(0.5) == doctest::Approx(std::exp(0.5)));

  spec.mu2 = 0.0;
  const TransformedProblem q(spec);
  CHECK(q.F(0.4, 0.9, 0.1) == doctest::Approx(std::exp(0.4)));

  const SpatialMesh mesh = make_spatial_mesh(1.0, 4, 4);
  Field2D v(5, 5);
  for (int m = 0; m <= 4; ++m) v.row(m).setConstant(std::exp(mesh.x(m)));
  const Field2D u = inverse_transform(v, mesh, q);
  CHECK((u.array() - 1.0).abs().maxCoeff() < 1e-15);
}

TEST_CASE("inverse transform undoes the forward transform") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coeff(-3.0, 3.0);
  std::uniform_real_distribution<double> diff(0.2, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    ProblemSpec spec = with_data({});
    spec.lambda1 = diff(rng);
    spec.lambda2 = diff(rng);
    spec.mu1 = coeff(rng);
    spec.mu2 = coeff(rng);
    spec.gamma = spec.beta() + spec.gamma - 1.0;
    spec.L = diff(rng);
    const TransformedProblem p(spec);
    const SpatialMesh mesh = make_spatial_mesh(spec.L, 9, 13);
    const Field2D u = Field2D::Random(10, 14);
    const Field2D back = inverse_transform(forward_transform(u, mesh, p), mesh, p);
    const double rel = ((back - u).array().abs() / u.array().abs()).maxCoeff();
    CHECK(rel <= 1e-14);
  }
}

TEST_CASE("transform rejects mismatched fields") {
  const TransformedProblem p(with_data({}));
  const SpatialMesh mesh = make_spatial_mesh(1.0, 4, 4);
  CHECK_THROWS_AS(inverse_transform(Field2D::Zero(4, 5), mesh, p), std::invalid_argument);
}
