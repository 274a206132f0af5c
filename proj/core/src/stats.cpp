#include "qtraj/stats.hpp"

#include <algorithm>
#include <cmath>

#include "qtraj/errors.hpp"

namespace qtraj {

double kolmogorov_q(double lambda) {
  if (lambda <= 0.0) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) {
    throw ArgumentError("ks_two_sample: empty sample");
  }
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());

  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  double fa = 0.0, fb = 0.0;
  while (ia < a.size() && ib < b.size()) {
    const double xa = a[ia], xb = b[ib];
    if (xa <= xb) fa = static_cast<double>(++ia) / na;
    if (xb <= xa) fb = static_cast<double>(++ib) / nb;
    d = std::max(d, std::abs(fa - fb));
  }
  d = std::max(d, 1.0 - std::min(fa, fb));
  d = std::min(d, 1.0);

  const double ne = na * nb / (na + nb);
  const double sqrt_ne = std::sqrt(ne);
  const double lambda = (sqrt_ne + 0.12 + 0.11 / sqrt_ne) * d;
  return {d, kolmogorov_q(lambda)};
}

namespace {

// Lower-incomplete series for x < a+1, continued fraction otherwise
// (Lentz's method).
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a;
  double term = sum;
  for (int n = 1; n < 500; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) {
    throw ArgumentError("regularized_gamma_q: invalid arguments");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return std::clamp(1.0 - gamma_p_series(a, x), 0.0, 1.0);
  return std::clamp(gamma_q_cf(a, x), 0.0, 1.0);
}

double chi_square_sf(double statistic, long dof) {
  if (dof < 1) throw ArgumentError("chi_square_sf: dof must be >= 1");
  return regularized_gamma_q(0.5 * static_cast<double>(dof),
                             0.5 * statistic);
}

Chi2Result chi_square_poisson(const std::vector<long>& counts, double lambda) {
  if (counts.empty()) throw ArgumentError("chi_square_poisson: no counts");
  if (lambda <= 0.0) throw ArgumentError("chi_square_poisson: lambda <= 0");
  const double n = static_cast<double>(counts.size());

  long max_count = 0;
  for (long c : counts) max_count = std::max(max_count, c);

  // Poisson pmf via logs, accumulated into bins of expected mass >= 5.
  auto pmf = [lambda](long k) {
    return std::exp(-lambda + k * std::log(lambda) -
                    std::lgamma(static_cast<double>(k) + 1.0));
  };

  std::vector<double> expected;
  std::vector<long> observed;
  double exp_acc = 0.0;
  long obs_acc = 0;
  std::vector<long> hist(max_count + 1, 0);
  for (long c : counts) ++hist[c];
  double cumulative_p = 0.0;
  for (long k = 0; k <= max_count; ++k) {
    const double p = pmf(k);
    cumulative_p += p;
    exp_acc += n * p;
    obs_acc += hist[k];
    if (exp_acc >= 5.0) {
      expected.push_back(exp_acc);
      observed.push_back(obs_acc);
      exp_acc = 0.0;
      obs_acc = 0;
    }
  }
  // Upper tail beyond max_count merged into the last bin.
  exp_acc += n * (1.0 - cumulative_p);
  if (expected.empty()) {
    expected.push_back(exp_acc);
    observed.push_back(obs_acc);
  } else {
    expected.back() += exp_acc;
    observed.back() += obs_acc;
  }

  if (expected.size() < 2) {
    throw ArgumentError(
        "chi_square_poisson: too few distinct count values to bin");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double diff = static_cast<double>(observed[i]) - expected[i];
    stat += diff * diff / expected[i];
  }
  const long dof = static_cast<long>(expected.size()) - 1;
  return {stat, dof, chi_square_sf(stat, dof)};
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ArgumentError("mean: empty sample");
  double acc = 0.0;
  for (double x : xs) acc += x;
  return acc / static_cast<double>(xs.size());
}

double variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ArgumentError("variance: need >= 2 samples");
  const double m = mean(xs);
  double acc = 0.0;
  for (double x : xs) acc += (x - m) * (x - m);
  return acc / static_cast<double>(xs.size() - 1);
}

}  // namespace qtraj
