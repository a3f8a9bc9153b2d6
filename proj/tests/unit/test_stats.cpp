#include "oracles.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/stats/tests.hpp"

#include <doctest.h>

#include <random>

using namespace vercheck;
using namespace vercheck::stats;

namespace {

constexpr Alternative alternatives[] = { Alternative::greater, Alternative::less, Alternative::two_sided };

// Small integers so that ties and zero differences show up often.
std::vector<double> sample(std::mt19937_64& rng, std::size_t n, int spread)
{
    std::uniform_int_distribution<int> d(-spread, spread);
    std::vector<double> v(n);
    for (auto& x : v)
        x = d(rng) * 0.5;
    return v;
}

}

TEST_CASE("signed-rank exact path equals enumeration for n <= 10")
{
    std::mt19937_64 rng(11);
    int compared = 0;
    for (std::size_t n = 1; n <= 10; ++n) {
        for (int trial = 0; trial < 40; ++trial) {
            auto v = sample(rng, n, trial % 2 ? 3 : 50);
            if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }))
                continue;
            for (auto alt : alternatives) {
                auto r = wilcoxon_signed_rank(v, 0.0, alt, MethodChoice::exact);
                INFO("n=" << n << " trial=" << trial);
                CHECK(r.method == Method::exact);
                CHECK(std::fabs(r.p_value - oracle::signed_rank_p(v, 0.0, alt)) <= 1e-12);
                ++compared;
            }
        }
    }
    CHECK(compared > 1000);
}

TEST_CASE("rank-sum exact path equals enumeration for n, m <= 10")
{
    std::mt19937_64 rng(12);
    for (std::size_t n = 1; n <= 10; ++n) {
        for (std::size_t m = 1; m <= 10; ++m) {
            for (int trial = 0; trial < 3; ++trial) {
                auto x = sample(rng, n, trial == 0 ? 2 : 40);
                auto y = sample(rng, m, trial == 0 ? 2 : 40);
                for (auto alt : alternatives) {
                    auto r = wilcoxon_rank_sum(x, y, alt, MethodChoice::exact);
                    INFO("n=" << n << " m=" << m << " trial=" << trial);
                    CHECK(std::fabs(r.p_value - oracle::rank_sum_p(x, y, alt)) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("reference p-values")
{
    std::vector<double> positive { 0.1, 0.2, 0.3, 0.4, 0.5, 0.6 };
    auto r = wilcoxon_signed_rank(positive, 0.0, Alternative::greater);
    CHECK(r.method == Method::exact);
    CHECK(r.p_value == 0.015625);
    CHECK(r.statistic == 21.0);

    std::vector<double> x { 4, 5, 6 }, y { 1, 2, 3 };
    auto s = wilcoxon_rank_sum(x, y, Alternative::greater);
    CHECK(s.p_value == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(s.statistic == 15.0);
    CHECK(wilcoxon_rank_sum(x, y, Alternative::two_sided).p_value == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(wilcoxon_rank_sum(x, y, Alternative::less).p_value == 1.0);

    CHECK(bonferroni(0.05, 2) == 0.025);
    CHECK(bonferroni(0.05, 1) == 0.05);
    CHECK(bonferroni(0.01, 5) == doctest::Approx(0.002));
    CHECK_THROWS_AS(bonferroni(0.05, 0), ConfigError);
}

TEST_CASE("signed-rank drops zero differences")
{
    std::vector<double> v { 1.0, 1.0, 2.0, 3.0 };
    auto r = wilcoxon_signed_rank(v, 1.0, Alternative::greater);
    CHECK(r.n == 2);
    CHECK(r.p_value == 0.25);
    CHECK_THROWS_AS(wilcoxon_signed_rank(std::vector<double> { 2.0, 2.0 }, 2.0, Alternative::greater), AnalysisError);
    CHECK_THROWS_AS(wilcoxon_rank_sum(std::vector<double> {}, v, Alternative::greater), AnalysisError);
}

// Every sign pattern of 1..12 and every 6/6 split of 0..11. The normal
// approximation is within 0.01 wherever the exact p is at most 0.1; in the
// body of the distribution the continuity-corrected approximation is off by
// up to about 0.015, so the bound there is 0.02.
TEST_CASE("normal approximation agrees with the exact path at n = 12")
{
    auto check = [](double exact, double approx) {
        if (exact <= 0.1)
            CHECK(std::fabs(exact - approx) <= 0.01);
        CHECK(std::fabs(exact - approx) <= 0.02);
    };
    for (unsigned mask = 0; mask < (1u << 12); ++mask) {
        std::vector<double> v;
        for (int i = 1; i <= 12; ++i)
            v.push_back((mask >> (i - 1) & 1) ? i : -i);
        for (auto alt : alternatives) {
            auto approx = wilcoxon_signed_rank(v, 0.0, alt, MethodChoice::normal_approximation);
            REQUIRE(approx.method == Method::normal_approximation);
            check(wilcoxon_signed_rank(v, 0.0, alt, MethodChoice::exact).p_value, approx.p_value);
        }
        if (__builtin_popcount(mask) != 6)
            continue;
        std::vector<double> x, y;
        for (int i = 0; i < 12; ++i)
            ((mask >> i & 1) ? x : y).push_back(i);
        for (auto alt : alternatives)
            check(wilcoxon_rank_sum(x, y, alt, MethodChoice::exact).p_value,
                wilcoxon_rank_sum(x, y, alt, MethodChoice::normal_approximation).p_value);
    }
}

TEST_CASE("automatic method switches above twelve observations")
{
    std::vector<double> v(13, 1.0);
    for (std::size_t i = 0; i < v.size(); ++i)
        v[i] = static_cast<double>(i) - 3.5;
    CHECK(wilcoxon_signed_rank(v, 0.0, Alternative::greater).method == Method::normal_approximation);
    v.pop_back();
    CHECK(wilcoxon_signed_rank(v, 0.0, Alternative::greater).method == Method::exact);
}

TEST_CASE("p-values are invariant under monotone transforms")
{
    std::mt19937_64 rng(14);
    std::normal_distribution<double> d(0.2, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(9), t(9), x(5), y(6), tx(5), ty(6);
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] = d(rng);
            t[i] = v[i] * v[i] * v[i] * 7.0; // odd power keeps signs and |.| order
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = d(rng);
            tx[i] = std::exp(x[i]);
        }
        for (std::size_t i = 0; i < y.size(); ++i) {
            y[i] = d(rng);
            ty[i] = std::exp(y[i]);
        }
        for (auto alt : alternatives) {
            CHECK(wilcoxon_signed_rank(v, 0.0, alt).p_value == wilcoxon_signed_rank(t, 0.0, alt).p_value);
            CHECK(wilcoxon_rank_sum(x, y, alt).p_value == wilcoxon_rank_sum(tx, ty, alt).p_value);
            double p = wilcoxon_rank_sum(x, y, alt, MethodChoice::normal_approximation).p_value;
            CHECK((p >= 0.0 && p <= 1.0));
        }
    }
}

TEST_CASE("chi-square tail against numerical integration")
{
    double oracle_p = oracle::chi_square_tail(3.84, 1.0);
    CHECK(std::fabs(oracle_p - 0.05) <= 5e-4);
    CHECK(chi_square_upper_tail(3.84, 1.0) == doctest::Approx(oracle_p).epsilon(1e-8));
    for (double df : { 2.0, 3.0, 7.0, 20.0 })
        for (double x : { 0.5, 3.0, 11.0 })
            CHECK(chi_square_upper_tail(x, df) == doctest::Approx(oracle::chi_square_tail(x, df)).epsilon(1e-7));
    CHECK(chi_square_upper_tail(0.0, 5.0) == 1.0);
    CHECK_THROWS_AS(chi_square_upper_tail(1.0, 0.0), AnalysisError);
}

TEST_CASE("chi-square goodness of fit")
{
    std::vector<double> o { 10, 20, 30 };
    auto same = chi_square_gof(o, o, 0);
    CHECK(same.statistic == 0.0);
    CHECK(same.p_value == 1.0);

    std::vector<double> e { 15, 20, 25 };
    auto r = chi_square_gof(o, e, 0);
    CHECK(r.statistic == doctest::Approx(25.0 / 15 + 25.0 / 25));
    CHECK(r.p_value == doctest::Approx(chi_square_upper_tail(r.statistic, 2)));

    CHECK_THROWS_AS(chi_square_gof(o, e, 2), AnalysisError);
    CHECK_THROWS_AS(chi_square_gof(o, std::vector<double> { 1, 0, 2 }, 0), AnalysisError);
    CHECK_THROWS_AS(chi_square_gof(o, std::vector<double> { 1, 2 }, 0), AnalysisError);
}

TEST_CASE("Laplace factor")
{
    std::vector<std::uint64_t> uniform(12, 5);
    CHECK(laplace_factor(uniform) == 0.0);

    std::vector<std::uint64_t> last(12, 0);
    last.back() = 20;
    CHECK(std::fabs(laplace_factor(last) - 7.1) <= 0.01);
    CHECK(laplace_factor(last) == doctest::Approx(oracle::laplace(last)).epsilon(1e-12));
    CHECK(laplace_trend(laplace_factor(last)) == Trend::increasing);

    std::vector<std::uint64_t> first(12, 0);
    first.front() = 20;
    CHECK(laplace_factor(first) == -laplace_factor(last));
    CHECK(laplace_trend(laplace_factor(first)) == Trend::decreasing);
    CHECK(laplace_trend(1.0) == Trend::none);

    CHECK_THROWS_AS(laplace_factor(std::vector<std::uint64_t> { 0, 0, 0 }), AnalysisError);
    CHECK_THROWS_AS(laplace_factor(std::vector<std::uint64_t> { 4 }), AnalysisError);
}

TEST_CASE("Laplace antisymmetry under time reversal")
{
    std::mt19937_64 rng(15);
    std::uniform_int_distribution<int> len(2, 40), count(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::uint64_t> c(static_cast<std::size_t>(len(rng)));
        for (auto& x : c)
            x = static_cast<std::uint64_t>(count(rng));
        c[0] += 1;
        auto reversed = std::vector<std::uint64_t>(c.rbegin(), c.rend());
        REQUIRE(laplace_factor(reversed) == -laplace_factor(c));
        CHECK(laplace_factor(c) == doctest::Approx(oracle::laplace(c)).epsilon(1e-12));
    }
}

TEST_CASE("names")
{
    CHECK(to_string(Alternative::two_sided) == "two-sided");
    CHECK(to_string(Method::normal_approximation) == "normal-approximation");
    CHECK(to_string(Trend::none) == "none");
    CHECK(normal_cdf(0.0) == 0.5);
}
