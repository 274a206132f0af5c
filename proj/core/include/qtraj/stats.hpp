#pragma once

#include <vector>

namespace qtraj {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value
/// Q_KS(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double kolmogorov_q(double lambda);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a),
/// by series / continued fraction.
double regularized_gamma_q(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees.
double chi_square_sf(double statistic, long dof);

struct Chi2Result {
  double statistic = 0.0;
  long dof = 0;
  double p_value = 1.0;
};

/// Goodness-of-fit of observed per-window event counts against a Poisson
/// law with known mean `lambda`. Count values are binned so every expected
/// bin mass is >= 5; dof = bins - 1 (lambda is not fitted).
Chi2Result chi_square_poisson(const std::vector<long>& counts, double lambda);

double mean(const std::vector<double>& xs);
double variance(const std::vector<double>& xs);

}  // namespace qtraj
