// Brute-force reference computations used to cross-check the library.
// Nothing here shares code with the estimators under test.
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace mixlens::testing {

struct LinearFit {
  std::vector<double> coefficients;
  double intercept = 0.0;
};

/// Weighted ridge regression with an unpenalized intercept, solved on the
/// raw (uncentred) normal equations by Gaussian elimination with partial
/// pivoting. Rows of `x` are feature vectors.
LinearFit gaussian_ridge(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
                         const std::vector<double>& w, double lambda);

/// Solves a dense square system in place; returns false when singular.
bool gauss_solve(std::vector<std::vector<double>> a, std::vector<double> b,
                 std::vector<double>& solution);

/// Shapley values as the average marginal contribution over all m!
/// orderings. `value` takes a coalition bitmask (bit i = player i).
std::vector<double> permutation_shapley(std::size_t m,
                                        const std::function<double(std::uint32_t)>& value);

/// log(p / (1 - p)) without clamping.
double logit(double p);
double sigmoid(double z);

}  // namespace mixlens::testing
