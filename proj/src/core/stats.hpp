#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fbt {

struct Sample {
  std::string label;
  std::vector<double> values;
};

struct TestResult {
  double statistic = 0.0;  // W, F or U
  std::optional<int> df1;
  std::optional<int> df2;
  double pValue = 1.0;
  bool rejectAt05 = false;
};

struct MeanSd {
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation, n - 1 denominator
};

// Throws kTooFewValues for n < 2.
MeanSd meanSd(std::span<const double> values);

inline constexpr std::size_t kShapiroWilkMinN = 3;
inline constexpr std::size_t kShapiroWilkMaxN = 5000;

// Shapiro-Wilk W with Royston's coefficient and p-value approximations
// (Applied Statistics algorithm AS R94). df1 carries n.
// Throws kSampleSizeOutOfRange outside [3, 5000] and kZeroVariance when all
// values are equal.
TestResult shapiroWilk(std::span<const double> values);

// One-way ANOVA across k groups; df = (k - 1, N - k). Throws kTooFewGroups,
// kTooFewValues (a group with n < 2) and kZeroWithinVariance.
TestResult anovaOneWay(std::span<const std::vector<double>> groups);

enum class MannWhitneyMethod {
  kAuto,        // exact when n_a + n_b <= 12, asymptotic otherwise
  kExact,       // permutation distribution of the observed midranks
  kAsymptotic,  // normal approximation with tie correction
};

inline constexpr std::size_t kMannWhitneyExactLimit = 12;

// Two-sided Mann-Whitney U test with midranks for ties. The statistic is
// min(U_a, U_b), where U_a counts pairs a_i > b_j (ties count one half).
// The asymptotic p-value applies no continuity correction.
// Throws kEmptySample.
TestResult mannWhitneyU(std::span<const double> a, std::span<const double> b,
                        MannWhitneyMethod method = MannWhitneyMethod::kAuto);

// Exact two-sided p-value P(|U - n_a n_b / 2| >= |u - n_a n_b / 2|) for
// untied data.
double mannWhitneyExactPValue(std::size_t na, std::size_t nb, double u);

}  // namespace fbt
