#include "tfcd/caputo.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tfcd {

namespace {

void check_level(const TemporalMesh& mesh, int i) {
  if (i < 0 || i > mesh.Nt() - 1) {
    std::ostringstream msg;
    msg << "time level " << i << " outside [0, " << mesh.Nt() - 1 << "]";
    throw std::out_of_range(msg.str());
  }
}

// a^p - (a - d)^p for 0 < d <= a without cancellation.
double power_gap(double a, double d, double p) {
  return std::pow(a, p) * -std::expm1(p * std::log1p(-d / a));
}

// int_0^1 (1 - eps u)^{-alpha} (u - 1/2) du for 0 < eps < 1.
//
// The two halves of the weight nearly cancel for small eps, so that range uses
// the binomial series sum_{n>=1} (alpha)_n/n! eps^n n / (2 (n+1)(n+2)).
double centered_moment(double eps, double alpha) {
  if (eps <= 0.5) {
    double sum = 0.0;
    double coeff = 1.0;
    for (int n = 1; n < 400; ++n) {
      coeff *= (alpha + n - 1) / n * eps;
      const double term = coeff * n / (2.0 * (n + 1) * (n + 2));
      sum += term;
      if (term < std::numeric_limits<double>::epsilon() * 1e-3 * sum) break;
    }
    return sum;
  }
  const double b = 1.0 - eps;
  const double i0 = -std::expm1((1.0 - alpha) * std::log1p(-eps)) / (eps * (1.0 - alpha));
  const double i1 = (i0 - (1.0 - std::pow(b, 2.0 - alpha)) / (eps * (2.0 - alpha))) / eps;
  return i1 - 0.5 * i0;
}

// t_{i+sigma} - t_k, formed from interval widths.
double offset_from(const TemporalMesh& mesh, int i, int k) {
  return (mesh.t(i) - mesh.t(k)) + mesh.sigma() * mesh.tau(i + 1);
}

}  // namespace

double r_coeff(const TemporalMesh& mesh, int i, int k) {
  check_level(mesh, i);
  if (k < 0 || k > i) throw std::out_of_range("r_coeff requires 0 <= k <= i");
  const double alpha = mesh.alpha();
  const double g2 = std::tgamma(2.0 - alpha);
  if (k == i) {
    return std::pow(mesh.sigma() * mesh.tau(i + 1), 1.0 - alpha) / g2;
  }
  return power_gap(offset_from(mesh, i, k), mesh.tau(k + 1), 1.0 - alpha) / g2;
}

double s_coeff(const TemporalMesh& mesh, int i, int k) {
  check_level(mesh, i);
  if (i < 1 || k < 0 || k > i - 1) throw std::out_of_range("s_coeff requires 0 <= k <= i-1");
  const double alpha = mesh.alpha();
  const double tau = mesh.tau(k + 1);
  const double a0 = offset_from(mesh, i, k);
  // v = t_k + tau u turns the integral into tau^2 a0^{-alpha} * centered_moment(tau / a0).
  const double integral = tau * tau * std::pow(a0, -alpha) * centered_moment(tau / a0, alpha);
  return 2.0 * integral / (std::tgamma(1.0 - alpha) * (mesh.tau(k + 1) + mesh.tau(k + 2)));
}

WeightRow weight_row(const TemporalMesh& mesh, int i) {
  check_level(mesh, i);
  WeightRow row;
  row.level = i;
  row.sigma = mesh.sigma();
  row.alpha = mesh.alpha();
  row.weights.resize(static_cast<std::size_t>(i) + 1);
  if (i == 0) {
    row.weights[0] = r_coeff(mesh, 0, 0) / mesh.tau(1);
    return row;
  }
  std::vector<double> s(static_cast<std::size_t>(i));
  for (int k = 0; k < i; ++k) s[k] = s_coeff(mesh, i, k);

  row.weights[0] = (r_coeff(mesh, i, 0) - s[0]) / mesh.tau(1);
  for (int k = 1; k < i; ++k) {
    row.weights[k] = (r_coeff(mesh, i, k) + s[k - 1] - s[k]) / mesh.tau(k + 1);
  }
  row.weights[i] = (r_coeff(mesh, i, i) + s[i - 1]) / mesh.tau(i + 1);
  return row;
}

double rho_from_ratio(double alpha, double eta) {
  const double sigma = 1.0 - alpha / 2.0;
  const double q = 1.0 + 1.0 / (sigma * eta);
  const double bracket = (std::pow(q, 2.0 - alpha) - 1.0) -
                         (std::pow(q, 1.0 - alpha) + 1.0) / eta;
  return 1.0 + bracket / (1.0 + 1.0 / eta);
}

double rho(const TemporalMesh& mesh, int i) {
  check_level(mesh, i);
  if (i < 1) throw std::out_of_range("rho is defined for levels i >= 1");
  return rho_from_ratio(mesh.alpha(), mesh.tau(i + 1) / mesh.tau(i));
}

double discrete_caputo(std::span<const double> history, const WeightRow& row) {
  if (history.size() != static_cast<std::size_t>(row.level) + 2) {
    std::ostringstream msg;
    msg << "discrete_caputo at level " << row.level << " needs " << row.level + 2
        << " history values, got " << history.size();
    throw std::invalid_argument(msg.str());
  }
  // Summation by parts of w_{i,i} g_{i+1} - sum (w_{i,k} - w_{i,k-1}) g_k - w_{i,0} g_0.
  double sum = 0.0;
  for (int k = 0; k <= row.level; ++k) sum += row[k] * (history[k + 1] - history[k]);
  return sum;
}

void InequalityTally::record(double margin) {
  worst_margin = samples == 0 ? margin : std::min(worst_margin, margin);
  ++samples;
}

WeightInequalities make_weight_inequalities() {
  return {InequalityTally{"(i) w_{i,0} > t_{i+sigma}^{-alpha}/Gamma(1-alpha)"},
          InequalityTally{"(ii) (2sigma-1) w_{1,1} - sigma w_{1,0} > 0"},
          InequalityTally{"(iii) w_{i,1} > w_{i,0}"},
          InequalityTally{"(iv) w_{i,k-1} < w_{i,k}"},
          InequalityTally{"(v) (2sigma-1) w_{i,i} - sigma w_{i,i-1} > 0"}};
}

void tally_weight_inequalities(const TemporalMesh& mesh, WeightInequalities& tallies) {
  const double alpha = mesh.alpha();
  const double sigma = mesh.sigma();
  const double g1 = std::tgamma(1.0 - alpha);
  const std::vector<double> eta = local_ratios(mesh);
  // eta_j lives at eta[j - 1].
  auto ratio = [&eta](int j) { return eta[static_cast<std::size_t>(j) - 1]; };

  for (int i = 0; i < mesh.Nt(); ++i) {
    const WeightRow row = weight_row(mesh, i);
    const double bound = std::pow(t_sigma(mesh, i), -alpha) / g1;
    tallies[0].record((row[0] - bound) / bound);
    if (i == 1) tallies[1].record(((2.0 * sigma - 1.0) * row[1] - sigma * row[0]) / row[1]);
    if (i >= 1) tallies[2].record((row[1] - row[0]) / row[1]);
    if (i >= 2) {
      for (int k = 2; k <= i; ++k) {
        const double prev = ratio(k - 1);
        const double cur = ratio(k);
        if (prev * prev * (prev + 1.0) >= cur / (cur + 1.0)) {
          tallies[3].record((row[k] - row[k - 1]) / row[k]);
        }
      }
      const double prev = ratio(i - 1);
      const double cur = ratio(i);
      if (prev * prev * (2.0 - 1.0 / sigma + cur * (cur + 2.0)) >=
          cur * (cur + 1.0) / (prev + 1.0)) {
        tallies[4].record(((2.0 * sigma - 1.0) * row[i] - sigma * row[i - 1]) / row[i]);
      }
    }
  }
}

}  // namespace tfcd
