#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>

#include "error.hpp"
#include "specfun.hpp"

namespace fbt {

namespace {

void requireFinite(std::span<const double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kInvalidArgument, std::string(what) + ": non-finite value");
  }
}

template <std::size_t N>
double poly(const double (&c)[N], double x) {
  double result = 0.0;
  for (std::size_t i = N; i-- > 0;) result = result * x + c[i];
  return result;
}

// Royston (1995) polynomial coefficients.
constexpr double kC1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
constexpr double kC2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
constexpr double kC3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
constexpr double kC4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
constexpr double kC5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
constexpr double kC6[] = {-0.4803, -0.082676, 0.0030302};
constexpr double kG[] = {-2.273, 0.459};

// Upper-half coefficients a_1..a_{n/2}, positive and normalised so that the
// full antisymmetric vector has unit length.
std::vector<double> shapiroWilkCoefficients(std::size_t n) {
  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::numbers::sqrt2 / 2.0;
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = specfun::normalQuantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2.0;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(kC1, rsn) - m[0] / ssumm2;

  std::size_t first;
  double fac;
  if (n > 5) {
    const double a2 = -m[1] / ssumm2 + poly(kC2, rsn);
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                    (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[0] = a1;
    a[1] = a2;
    first = 2;
  } else {
    fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
    a[0] = a1;
    first = 1;
  }
  for (std::size_t i = first; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

double shapiroWilkPValue(double w, std::size_t n) {
  if (n == 3) {
    constexpr double kPi6 = 6.0 / std::numbers::pi;
    constexpr double kStqr = std::numbers::pi / 3.0;  // asin(sqrt(3/4))
    return std::clamp(kPi6 * (std::asin(std::sqrt(w)) - kStqr), 0.0, 1.0);
  }
  const double w1 = 1.0 - w;
  if (w1 <= 0.0) return 1.0;
  double y = std::log(w1);
  const double an = static_cast<double>(n);
  double mean;
  double sd;
  if (n <= 11) {
    const double gamma = poly(kG, an);
    if (y >= gamma) return 1e-99;
    y = -std::log(gamma - y);
    mean = poly(kC3, an);
    sd = std::exp(poly(kC4, an));
  } else {
    const double logn = std::log(an);
    mean = poly(kC5, logn);
    sd = std::exp(poly(kC6, logn));
  }
  return specfun::normalUpperTail((y - mean) / sd);
}

std::vector<double> midranks(std::span<const double> pooled) {
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && pooled[order[j]] == pooled[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

// Counts, over all size-na subsets of the pooled doubled ranks, how many give
// a doubled U at least as far from its mean as the observed one.
double exactTwoSided(std::span<const std::int64_t> doubledRanks, std::size_t na,
                     std::int64_t observedDoubledU) {
  const std::size_t n = doubledRanks.size();
  const std::int64_t nb = static_cast<std::int64_t>(n - na);
  const std::int64_t total = std::accumulate(doubledRanks.begin(), doubledRanks.end(), std::int64_t{0});
  // dp[k][s]: number of k-subsets with doubled rank sum s.
  std::vector<std::vector<double>> dp(na + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  dp[0][0] = 1.0;
  for (std::int64_t r : doubledRanks) {
    for (std::size_t k = na; k >= 1; --k) {
      auto& row = dp[k];
      const auto& prev = dp[k - 1];
      for (std::int64_t s = total; s >= r; --s) row[s] += prev[s - r];
    }
  }
  const std::int64_t ina = static_cast<std::int64_t>(na);
  const std::int64_t offset = ina * (ina + 1);
  const std::int64_t centre = ina * nb;
  const std::int64_t observed = std::llabs(observedDoubledU - centre);
  double extreme = 0.0;
  double all = 0.0;
  for (std::int64_t s = 0; s <= total; ++s) {
    const double count = dp[na][s];
    if (count == 0.0) continue;
    all += count;
    if (std::llabs((s - offset) - centre) >= observed) extreme += count;
  }
  return std::min(1.0, extreme / all);
}

}  // namespace

MeanSd meanSd(std::span<const double> values) {
  if (values.size() < 2) throw Error(ErrorCode::kTooFewValues, "mean/sd needs at least 2 values");
  requireFinite(values, "meanSd");
  const double n = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

TestResult shapiroWilk(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < kShapiroWilkMinN || n > kShapiroWilkMaxN) {
    throw Error(ErrorCode::kSampleSizeOutOfRange,
                "Shapiro-Wilk needs 3 <= n <= 5000, got n = " + std::to_string(n));
  }
  requireFinite(values, "shapiroWilk");
  std::vector<double> x(values.begin(), values.end());
  std::sort(x.begin(), x.end());
  const double range = x.back() - x.front();
  const double scale = std::max(std::fabs(x.front()), std::fabs(x.back()));
  if (range <= 1e-14 * scale || range == 0.0) {
    throw Error(ErrorCode::kZeroVariance, "Shapiro-Wilk W is undefined for zero-variance data");
  }

  // Work on range-scaled data, as AS R94 does.
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double& v : x) {
    v = (v - mean) / range;
    ss += v * v;
  }
  const auto a = shapiroWilkCoefficients(n);
  double ax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ax += a[i] * (x[n - 1 - i] - x[i]);
  const double w = std::min(1.0, (ax * ax) / ss);

  TestResult result;
  result.statistic = w;
  result.df1 = static_cast<int>(n);
  result.pValue = shapiroWilkPValue(w, n);
  result.rejectAt05 = result.pValue < 0.05;
  return result;
}

TestResult anovaOneWay(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw Error(ErrorCode::kTooFewGroups, "ANOVA needs at least 2 groups");
  std::size_t total = 0;
  double grandSum = 0.0;
  for (const auto& g : groups) {
    if (g.size() < 2) throw Error(ErrorCode::kTooFewValues, "each ANOVA group needs n >= 2");
    requireFinite(g, "anovaOneWay");
    total += g.size();
    grandSum += std::accumulate(g.begin(), g.end(), 0.0);
  }
  const double grandMean = grandSum / static_cast<double>(total);
  double between = 0.0;
  double within = 0.0;
  for (const auto& g : groups) {
    const double n = static_cast<double>(g.size());
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / n;
    between += n * (mean - grandMean) * (mean - grandMean);
    for (double v : g) within += (v - mean) * (v - mean);
  }
  const int df1 = static_cast<int>(groups.size()) - 1;
  const int df2 = static_cast<int>(total - groups.size());
  if (within <= 0.0) {
    throw Error(ErrorCode::kZeroWithinVariance, "ANOVA F is undefined with zero within-group variance");
  }
  TestResult result;
  result.statistic = (between / df1) / (within / df2);
  result.df1 = df1;
  result.df2 = df2;
  result.pValue = specfun::fSurvival(result.statistic, df1, df2);
  result.rejectAt05 = result.pValue < 0.05;
  return result;
}

TestResult mannWhitneyU(std::span<const double> a, std::span<const double> b,
                        MannWhitneyMethod method) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::kEmptySample, "Mann-Whitney needs two non-empty samples");
  requireFinite(a, "mannWhitneyU");
  requireFinite(b, "mannWhitneyU");
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t n = na + nb;

  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const auto ranks = midranks(pooled);
  std::vector<std::int64_t> doubled(n);
  for (std::size_t i = 0; i < n; ++i) doubled[i] = std::llround(2.0 * ranks[i]);

  const std::int64_t doubledRankSumA = std::accumulate(doubled.begin(), doubled.begin() + static_cast<std::ptrdiff_t>(na), std::int64_t{0});
  const std::int64_t ina = static_cast<std::int64_t>(na);
  const std::int64_t doubledUa = doubledRankSumA - ina * (ina + 1);
  const double ua = static_cast<double>(doubledUa) / 2.0;
  const double ub = static_cast<double>(na * nb) - ua;

  TestResult result;
  result.statistic = std::min(ua, ub);

  const bool exact = method == MannWhitneyMethod::kExact ||
                     (method == MannWhitneyMethod::kAuto && n <= kMannWhitneyExactLimit);
  if (exact) {
    result.pValue = exactTwoSided(doubled, na, doubledUa);
  } else {
    // Tie correction: sum of (t^3 - t) over tie groups.
    std::vector<double> sorted = pooled;
    std::sort(sorted.begin(), sorted.end());
    double tieTerm = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i);
      tieTerm += t * t * t - t;
      i = j;
    }
    const double dn = static_cast<double>(n);
    const double variance = static_cast<double>(na * nb) / 12.0 *
                            ((dn + 1.0) - (n > 1 ? tieTerm / (dn * (dn - 1.0)) : 0.0));
    if (variance <= 0.0) {
      result.pValue = 1.0;
    } else {
      const double z = (ua - static_cast<double>(na * nb) / 2.0) / std::sqrt(variance);
      result.pValue = std::min(1.0, 2.0 * specfun::normalUpperTail(std::fabs(z)));
    }
  }
  result.rejectAt05 = result.pValue < 0.05;
  return result;
}

double mannWhitneyExactPValue(std::size_t na, std::size_t nb, double u) {
  if (na == 0 || nb == 0) throw Error(ErrorCode::kEmptySample, "Mann-Whitney needs two non-empty samples");
  std::vector<std::int64_t> doubled(na + nb);
  for (std::size_t i = 0; i < doubled.size(); ++i) doubled[i] = 2 * static_cast<std::int64_t>(i + 1);
  return exactTwoSided(doubled, na, std::llround(2.0 * u));
}

}  // namespace fbt
