#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace vercheck::stats {

enum class Alternative { greater, less, two_sided };
enum class Method { exact, normal_approximation };
/// `automatic` picks the exact distribution for small samples.
enum class MethodChoice { automatic, exact, normal_approximation };

std::string_view to_string(Alternative alternative);
std::string_view to_string(Method method);

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    Method method = Method::exact;
    Alternative alternative = Alternative::two_sided;
    std::size_t n = 0;
    std::size_t m = 0; // second sample size, 0 for one-sample tests
};

inline constexpr std::size_t exact_signed_rank_limit = 12;
inline constexpr std::size_t exact_rank_sum_limit = 12;

/// One-sample Wilcoxon signed-rank test of values against median mu0.
/// Differences equal to mu0 are dropped; ties get midranks. The statistic
/// is W+ (rank sum of positive differences). Throws AnalysisError when no
/// non-zero difference remains.
TestResult wilcoxon_signed_rank(std::span<const double> values, double mu0, Alternative alternative,
    MethodChoice method = MethodChoice::automatic);

/// Wilcoxon rank-sum (Mann-Whitney) test. The statistic is the rank sum of
/// x in the pooled sample; `greater` means x tends to be larger than y.
TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Alternative alternative,
    MethodChoice method = MethodChoice::automatic);

/// Per-test significance level for m comparisons.
double bonferroni(double alpha, std::size_t m);

/// Laplace trend factor for grouped counts, events placed at the middle of
/// each month. Positive values mean the rate increases.
double laplace_factor(std::span<const std::uint64_t> counts);

enum class Trend { increasing, decreasing, none };
Trend laplace_trend(double factor, double threshold = 1.96);
std::string_view to_string(Trend trend);

/// Upper tail P(X >= statistic) of the chi-square distribution.
double chi_square_upper_tail(double statistic, double df);

/// Pearson goodness of fit with df = bins - 1 - fitted_params.
TestResult chi_square_gof(std::span<const double> observed, std::span<const double> expected, std::size_t fitted_params);

/// Standard normal CDF.
double normal_cdf(double z);

}
