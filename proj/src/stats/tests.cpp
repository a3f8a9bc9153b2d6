#include "vercheck/stats/tests.hpp"

#include "vercheck/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>
#include <fmt/format.h>

namespace vercheck::stats {

std::string_view to_string(Alternative alternative)
{
    switch (alternative) {
    case Alternative::greater:
        return "greater";
    case Alternative::less:
        return "less";
    case Alternative::two_sided:
        break;
    }
    return "two-sided";
}

std::string_view to_string(Method method)
{
    return method == Method::exact ? "exact" : "normal-approximation";
}

std::string_view to_string(Trend trend)
{
    switch (trend) {
    case Trend::increasing:
        return "increasing";
    case Trend::decreasing:
        return "decreasing";
    case Trend::none:
        break;
    }
    return "none";
}

double normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

namespace {

// Midranks doubled so that they stay integral. Also returns the tie
// correction sum of (t^3 - t) over tie groups.
std::vector<std::int64_t> doubled_ranks(std::span<const double> values, double* tie_sum)
{
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });

    std::vector<std::int64_t> ranks(values.size());
    double ties = 0;
    for (std::size_t i = 0; i < order.size();) {
        auto j = i;
        while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]])
            ++j;
        // ranks i+1 .. j+1, doubled midrank = i + j + 2
        for (auto k = i; k <= j; ++k)
            ranks[order[k]] = static_cast<std::int64_t>(i + j + 2);
        double t = static_cast<double>(j - i + 1);
        ties += t * t * t - t;
        i = j + 1;
    }
    if (tie_sum)
        *tie_sum = ties;
    return ranks;
}

double combine(double p_greater, double p_less, Alternative alternative)
{
    switch (alternative) {
    case Alternative::greater:
        return std::clamp(p_greater, 0.0, 1.0);
    case Alternative::less:
        return std::clamp(p_less, 0.0, 1.0);
    case Alternative::two_sided:
        break;
    }
    return std::clamp(2.0 * std::min(p_greater, p_less), 0.0, 1.0);
}

double normal_p(double statistic, double mean, double variance, Alternative alternative)
{
    if (variance <= 0)
        return 1.0;
    double sd = std::sqrt(variance);
    double d = statistic - mean;
    switch (alternative) {
    case Alternative::greater:
        return 1.0 - normal_cdf((d - 0.5) / sd);
    case Alternative::less:
        return normal_cdf((d + 0.5) / sd);
    case Alternative::two_sided:
        break;
    }
    double z = (std::abs(d) - 0.5) / sd;
    if (z < 0)
        return 1.0;
    return std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
}

}

TestResult wilcoxon_signed_rank(std::span<const double> values, double mu0, Alternative alternative, MethodChoice method)
{
    std::vector<double> magnitudes;
    std::vector<bool> positive;
    for (double x : values) {
        double d = x - mu0;
        if (std::isnan(d))
            throw AnalysisError("signed-rank test: NaN in sample");
        if (d == 0.0)
            continue;
        magnitudes.push_back(std::abs(d));
        positive.push_back(d > 0);
    }
    const auto n = magnitudes.size();
    if (n == 0)
        throw AnalysisError("signed-rank test: degenerate sample (all differences are zero)");

    double tie_sum = 0;
    auto ranks = doubled_ranks(magnitudes, &tie_sum);
    std::int64_t w2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (positive[i])
            w2 += ranks[i];

    TestResult result;
    result.statistic = static_cast<double>(w2) / 2.0;
    result.alternative = alternative;
    result.n = n;

    bool exact = method == MethodChoice::exact || (method == MethodChoice::automatic && n <= exact_signed_rank_limit);
    if (exact) {
        if (n > 60)
            throw AnalysisError("signed-rank test: exact distribution limited to 60 observations");
        // distribution of the doubled W+ over all 2^n sign patterns
        auto total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t { 0 });
        std::vector<double> dist(static_cast<std::size_t>(total) + 1, 0.0);
        dist[0] = 1.0;
        std::int64_t reach = 0;
        for (auto r : ranks) {
            for (auto s = reach; s >= 0; --s)
                dist[static_cast<std::size_t>(s + r)] += dist[static_cast<std::size_t>(s)];
            reach += r;
        }
        double all = std::ldexp(1.0, static_cast<int>(n));
        double ge = 0, le = 0;
        for (std::int64_t s = 0; s <= total; ++s) {
            if (s >= w2)
                ge += dist[static_cast<std::size_t>(s)];
            if (s <= w2)
                le += dist[static_cast<std::size_t>(s)];
        }
        result.method = Method::exact;
        result.p_value = combine(ge / all, le / all, alternative);
    } else {
        double nn = static_cast<double>(n);
        double mean = nn * (nn + 1) / 4.0;
        double variance = nn * (nn + 1) * (2 * nn + 1) / 24.0 - tie_sum / 48.0;
        result.method = Method::normal_approximation;
        result.p_value = normal_p(result.statistic, mean, variance, alternative);
    }
    return result;
}

TestResult wilcoxon_rank_sum(std::span<const double> x, std::span<const double> y, Alternative alternative, MethodChoice method)
{
    if (x.empty() || y.empty())
        throw AnalysisError("rank-sum test: both samples must be non-empty");
    std::vector<double> pooled(x.begin(), x.end());
    pooled.insert(pooled.end(), y.begin(), y.end());
    for (double v : pooled)
        if (std::isnan(v))
            throw AnalysisError("rank-sum test: NaN in sample");

    double tie_sum = 0;
    auto ranks = doubled_ranks(pooled, &tie_sum);
    const auto n = x.size();
    const auto m = y.size();
    const auto total_n = n + m;
    std::int64_t w2 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<long>(n), std::int64_t { 0 });

    TestResult result;
    result.statistic = static_cast<double>(w2) / 2.0;
    result.alternative = alternative;
    result.n = n;
    result.m = m;

    bool exact = method == MethodChoice::exact || (method == MethodChoice::automatic && total_n <= exact_rank_sum_limit);
    if (exact) {
        if (total_n > 60)
            throw AnalysisError("rank-sum test: exact distribution limited to 60 observations");
        auto total = std::accumulate(ranks.begin(), ranks.end(), std::int64_t { 0 });
        auto width = static_cast<std::size_t>(total) + 1;
        // dist[k][s]: subsets of size k with doubled rank sum s
        std::vector<std::vector<double>> dist(n + 1, std::vector<double>(width, 0.0));
        dist[0][0] = 1.0;
        for (auto r : ranks)
            for (auto k = n; k >= 1; --k)
                for (auto s = static_cast<std::int64_t>(width) - 1; s >= r; --s)
                    dist[k][static_cast<std::size_t>(s)] += dist[k - 1][static_cast<std::size_t>(s - r)];
        double all = 0, ge = 0, le = 0;
        for (std::size_t s = 0; s < width; ++s) {
            double c = dist[n][s];
            all += c;
            if (static_cast<std::int64_t>(s) >= w2)
                ge += c;
            if (static_cast<std::int64_t>(s) <= w2)
                le += c;
        }
        result.method = Method::exact;
        result.p_value = combine(ge / all, le / all, alternative);
    } else {
        double nn = static_cast<double>(n), mm = static_cast<double>(m), N = nn + mm;
        double mean = nn * (N + 1) / 2.0;
        double variance = nn * mm / 12.0 * ((N + 1) - tie_sum / (N * (N - 1)));
        result.method = Method::normal_approximation;
        result.p_value = normal_p(result.statistic, mean, variance, alternative);
    }
    return result;
}

double bonferroni(double alpha, std::size_t m)
{
    if (m == 0)
        throw ConfigError("Bonferroni correction needs at least one comparison");
    return alpha / static_cast<double>(m);
}

double laplace_factor(std::span<const std::uint64_t> counts)
{
    const auto k = counts.size();
    if (k < 2)
        throw AnalysisError("Laplace test needs at least two months");
    // work in half-months so the event times (i - 0.5) stay integral
    std::int64_t events = 0;
    std::int64_t weighted = 0;
    for (std::size_t i = 0; i < k; ++i) {
        auto c = static_cast<std::int64_t>(counts[i]);
        events += c;
        weighted += c * static_cast<std::int64_t>(2 * i + 1);
    }
    if (events == 0)
        throw AnalysisError("Laplace test: no events");
    auto numerator = weighted - static_cast<std::int64_t>(k) * events;
    double N = static_cast<double>(events);
    double mean_shift = static_cast<double>(numerator) / (2.0 * N);
    return mean_shift / (static_cast<double>(k) * std::sqrt(1.0 / (12.0 * N)));
}

Trend laplace_trend(double factor, double threshold)
{
    if (factor > threshold)
        return Trend::increasing;
    if (factor < -threshold)
        return Trend::decreasing;
    return Trend::none;
}

double chi_square_upper_tail(double statistic, double df)
{
    if (!(df > 0))
        throw AnalysisError("chi-square: insufficient degrees of freedom");
    if (std::isnan(statistic))
        throw AnalysisError("chi-square: statistic is NaN");
    if (statistic <= 0)
        return 1.0;
    if (std::isinf(statistic))
        return 0.0;
    return boost::math::gamma_q(df / 2.0, statistic / 2.0);
}

TestResult chi_square_gof(std::span<const double> observed, std::span<const double> expected, std::size_t fitted_params)
{
    if (observed.size() != expected.size())
        throw AnalysisError("chi-square: observed and expected differ in length");
    if (observed.size() < 2)
        throw AnalysisError("chi-square: at least two bins are required");
    if (observed.size() <= 1 + fitted_params)
        throw AnalysisError("chi-square: insufficient degrees of freedom");
    double statistic = 0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (!(expected[i] > 0))
            throw AnalysisError(fmt::format("chi-square: expected value {} in bin {} is not positive", expected[i], i));
        double d = observed[i] - expected[i];
        statistic += d * d / expected[i];
    }
    TestResult result;
    result.statistic = statistic;
    result.n = observed.size();
    result.alternative = Alternative::greater;
    result.method = Method::exact;
    auto df = static_cast<double>(observed.size() - 1 - fitted_params);
    result.p_value = chi_square_upper_tail(statistic, df);
    return result;
}

}
