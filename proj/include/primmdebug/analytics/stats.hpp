#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace primmdebug::analytics {

double mean(std::span<const double> xs);
double median(std::span<const double> xs);
// Sample standard deviation (n - 1 denominator).
double sample_sd(std::span<const double> xs);

// Adjusted Fisher-Pearson standardized moment coefficient
//   G1 = sqrt(n(n-1)) / (n-2) * m3 / m2^(3/2)
// with biased central moments m2, m3. Error{kUndefined} when n < 3 or all
// samples are equal.
double skewness(std::span<const double> xs);

struct Summary {
  std::size_t count = 0;
  double mean = 0.0;
  double median = 0.0;
  std::optional<double> sd;        // null when count < 2
  std::optional<double> skewness;  // null when undefined
};

// Error{kNoData} on an empty sample.
Summary describe(std::span<const double> xs);

struct KendallResult {
  std::optional<double> tau;      // null when either variable is constant
  std::optional<double> p_value;  // null below kMinPairsForPValue or when tau is null
  std::size_t n = 0;              // complete pairs used
};

inline constexpr std::size_t kMinPairsForPValue = 3;

// Kendall tau-b with tie correction; two-sided p from the normal
// approximation with tie-adjusted variance. Pairs with a missing value on
// either side are dropped. Error{kPrecondition} for length mismatch or fewer
// than two complete pairs.
KendallResult kendall_tau_b(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y);
KendallResult kendall_tau_b(std::span<const double> x, std::span<const double> y);

// Cronbach's alpha over a participant x item matrix (rows are participants,
// complete cases only). Error{kPrecondition} for fewer than two items or
// participants or ragged rows; Error{kDegenerate} for zero total variance.
double cronbach_alpha(const std::vector<std::vector<double>>& rows);

}  // namespace primmdebug::analytics
