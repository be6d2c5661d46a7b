#include "primmdebug/analytics/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "primmdebug/error.hpp"

namespace primmdebug::analytics {
namespace {

// Two-pass mean with a correction term; keeps symmetric samples exactly
// centred.
double accurate_mean(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double m = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double correction = 0.0;
  for (double x : xs) correction += x - m;
  return m + correction / n;
}

double sample_variance(std::span<const double> xs) {
  const double m = accurate_mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

// Inversions (i < j with v[i] > v[j]) counted by bottom-up merge sort; v
// ends up sorted.
std::int64_t count_inversions(std::vector<double>& v) {
  std::int64_t swaps = 0;
  std::vector<double> buffer(v.size());
  for (std::size_t width = 1; width < v.size(); width *= 2) {
    for (std::size_t lo = 0; lo < v.size(); lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, v.size());
      const std::size_t hi = std::min(lo + 2 * width, v.size());
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (v[j] < v[i]) {
          swaps += static_cast<std::int64_t>(mid - i);
          buffer[k++] = v[j++];
        } else {
          buffer[k++] = v[i++];
        }
      }
      while (i < mid) buffer[k++] = v[i++];
      while (j < hi) buffer[k++] = v[j++];
    }
    v.swap(buffer);
  }
  return swaps;
}

struct TieSums {
  std::int64_t pairs = 0;  // sum t(t-1)/2
  double t2 = 0.0;         // sum t(t-1)(t-2)
  double t5 = 0.0;         // sum t(t-1)(2t+5)
};

template <class It, class Eq>
TieSums tie_sums(It first, It last, Eq eq) {
  TieSums sums;
  while (first != last) {
    It run_end = std::next(first);
    while (run_end != last && eq(*first, *run_end)) ++run_end;
    const auto t = static_cast<std::int64_t>(std::distance(first, run_end));
    if (t > 1) {
      const double td = static_cast<double>(t);
      sums.pairs += t * (t - 1) / 2;
      sums.t2 += td * (td - 1) * (td - 2);
      sums.t5 += td * (td - 1) * (2 * td + 5);
    }
    first = run_end;
  }
  return sums;
}

}  // namespace

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::kNoData, "mean of an empty sample");
  return accurate_mean(xs);
}

double median(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::kNoData, "median of an empty sample");
  std::vector<double> sorted(xs.begin(), xs.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t mid = sorted.size() / 2;
  if (sorted.size() % 2 == 1) return sorted[mid];
  return (sorted[mid - 1] + sorted[mid]) / 2.0;
}

double sample_sd(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorCode::kUndefined, "standard deviation needs two samples");
  return std::sqrt(sample_variance(xs));
}

double skewness(std::span<const double> xs) {
  if (xs.size() < 3) throw Error(ErrorCode::kUndefined, "skewness needs at least three samples");
  if (std::all_of(xs.begin(), xs.end(), [&](double x) { return x == xs.front(); })) {
    throw Error(ErrorCode::kUndefined, "skewness of a constant sample");
  }
  const double n = static_cast<double>(xs.size());
  const double m = accurate_mean(xs);
  double m2 = 0.0;
  double m3 = 0.0;
  for (double x : xs) {
    const double d = x - m;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  if (m2 <= 0.0) throw Error(ErrorCode::kUndefined, "skewness of a constant sample");
  const double g1 = m3 / std::pow(m2, 1.5);
  return std::sqrt(n * (n - 1)) / (n - 2) * g1;
}

Summary describe(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::kNoData, "no samples");
  Summary s;
  s.count = xs.size();
  s.mean = mean(xs);
  s.median = median(xs);
  if (xs.size() >= 2) s.sd = sample_sd(xs);
  try {
    s.skewness = skewness(xs);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUndefined) throw;
  }
  return s;
}

KendallResult kendall_tau_b(std::span<const std::optional<double>> x,
                            std::span<const std::optional<double>> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kPrecondition, "kendall_tau_b: vectors differ in length");
  }
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] && y[i]) pairs.emplace_back(*x[i], *y[i]);
  }
  if (pairs.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "kendall_tau_b: fewer than two complete pairs");
  }

  KendallResult result;
  result.n = pairs.size();
  const auto n = static_cast<std::int64_t>(pairs.size());
  const std::int64_t n0 = n * (n - 1) / 2;

  std::sort(pairs.begin(), pairs.end());
  const TieSums x_ties = tie_sums(pairs.begin(), pairs.end(),
                                  [](const auto& a, const auto& b) { return a.first == b.first; });
  const TieSums joint_ties = tie_sums(pairs.begin(), pairs.end(),
                                      [](const auto& a, const auto& b) { return a == b; });
  std::vector<double> ys;
  ys.reserve(pairs.size());
  for (const auto& p : pairs) ys.push_back(p.second);
  const std::int64_t swaps = count_inversions(ys);
  const TieSums y_ties =
      tie_sums(ys.begin(), ys.end(), [](double a, double b) { return a == b; });

  const std::int64_t s = n0 - x_ties.pairs - y_ties.pairs + joint_ties.pairs - 2 * swaps;
  const std::int64_t untied_x = n0 - x_ties.pairs;
  const std::int64_t untied_y = n0 - y_ties.pairs;
  if (untied_x == 0 || untied_y == 0) return result;

  result.tau = static_cast<double>(s) /
               std::sqrt(static_cast<double>(untied_x) * static_cast<double>(untied_y));

  if (pairs.size() >= kMinPairsForPValue) {
    const double nd = static_cast<double>(n);
    const double m = nd * (nd - 1);
    const double var = (m * (2 * nd + 5) - x_ties.t5 - y_ties.t5) / 18.0 +
                       2.0 * static_cast<double>(x_ties.pairs) *
                           static_cast<double>(y_ties.pairs) / m +
                       x_ties.t2 * y_ties.t2 / (9.0 * m * (nd - 2));
    if (var > 0.0) {
      const double z = static_cast<double>(s) / std::sqrt(var);
      result.p_value = std::erfc(std::abs(z) / std::sqrt(2.0));
    }
  }
  return result;
}

KendallResult kendall_tau_b(std::span<const double> x, std::span<const double> y) {
  std::vector<std::optional<double>> ox(x.begin(), x.end());
  std::vector<std::optional<double>> oy(y.begin(), y.end());
  return kendall_tau_b(ox, oy);
}

double cronbach_alpha(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 2) throw Error(ErrorCode::kPrecondition, "cronbach_alpha: need two participants");
  const std::size_t k = rows.front().size();
  if (k < 2) throw Error(ErrorCode::kPrecondition, "cronbach_alpha: need two items");
  for (const auto& row : rows) {
    if (row.size() != k) throw Error(ErrorCode::kPrecondition, "cronbach_alpha: ragged rows");
  }

  double item_variance_sum = 0.0;
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    item_variance_sum += sample_variance(column);
  }
  std::vector<double> totals;
  for (const auto& row : rows) totals.push_back(std::accumulate(row.begin(), row.end(), 0.0));
  const double total_variance = sample_variance(totals);
  if (total_variance == 0.0) {
    throw Error(ErrorCode::kDegenerate, "cronbach_alpha: total scores have zero variance");
  }
  const double kd = static_cast<double>(k);
  return kd / (kd - 1) * (1.0 - item_variance_sum / total_variance);
}

}  // namespace primmdebug::analytics
