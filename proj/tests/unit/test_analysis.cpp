#include "vercheck/analysis/error_analysis.hpp"
#include "vercheck/core/error.hpp"

#include "twenty_table.hpp"

#include <doctest.h>

#include <numeric>
#include <random>
#include <sstream>

using namespace vercheck;
using namespace vercheck::analysis;
using namespace table20;

TEST_CASE("error rate arithmetic")
{
    auto a = error_rates(3, 1, 0);
    CHECK(same(a.er, frac(1, 4)));
    CHECK(same(a.er_prime, frac(1, 4)));
    auto b = error_rates(6, 2, 12);
    CHECK(same(b.er, frac(1, 4)));
    CHECK(same(b.er_prime, frac(1, 10)));
    CHECK(same(error_rates(5, 0, 3).er, frac(0, 1)));
    CHECK_FALSE(error_rates(0, 0, 0).er.has_value());
    CHECK_FALSE(error_rates(0, 0, 0).er_prime.has_value());
    auto c = error_rates(0, 0, 4);
    CHECK_FALSE(c.er.has_value());
    CHECK(same(c.er_prime, frac(0, 1)));
    CHECK(ratio_string(Ratio(6, 8)) == "3/4");
    CHECK(ratio_value(Ratio(1, 4)) == 0.25);
}

TEST_CASE("twenty-CVE table, hand computed at versions 1 and 3")
{
    auto t = twenty();
    auto catalog = five_versions();

    auto v3 = classify(t.results, t.dataset, catalog, ver(3));
    CHECK(v3.verified == CveSet { "C01", "C02", "C09", "C11", "C16", "C17" });
    CHECK(v3.erroneous == CveSet { "C03", "C04", "C05", "C06", "C12", "C13", "C15", "C18" });
    CHECK(v3.unverifiable == CveSet { "C07", "C08", "C19" });
    auto r3 = error_rates(v3);
    CHECK(same(r3.er, { 4, 7 }));
    CHECK(same(r3.er_prime, { 8, 17 }));

    auto strict = classify(t.results, t.dataset, catalog, ver(3), true);
    CHECK(strict.verified == CveSet { "C01", "C02", "C11", "C16" });
    CHECK(same(error_rates(strict).er, { 2, 3 }));

    auto tax = error_taxonomy(v3.erroneous, t.results, ver(3));
    CHECK(tax.past == CveSet { "C04", "C12" });
    CHECK(tax.future == CveSet { "C05", "C13", "C15" });
    CHECK(tax.beta == CveSet { "C03", "C18" });
    CHECK(tax.other == CveSet { "C06" });

    auto v1 = classify(t.results, t.dataset, catalog, ver(1));
    CHECK(v1.verified.size() == 6);
    CHECK(v1.erroneous == CveSet { "C02", "C03", "C15" });
    CHECK(v1.unverifiable == CveSet { "C08", "C19" });
    CHECK(same(error_rates(v1).er, { 1, 3 }));
    CHECK(same(error_rates(v1).er_prime, { 3, 11 }));
    auto tax1 = error_taxonomy(v1.erroneous, t.results, ver(1));
    CHECK(tax1.past == CveSet { "C02", "C15" });
    CHECK(tax1.beta == CveSet { "C03" });
    CHECK(tax1.future.empty());

    auto rows = foundational_report(t.results, t.dataset, catalog);
    REQUIRE(rows.size() == 5);
    CHECK(rows[2].version == ver(3));
    CHECK(same(rows[2].reported_fraction(), { 8, 15 }));
    CHECK(same(rows[2].verified_fraction(), { 1, 3 }));

    CHECK_THROWS_AS(classify(t.results, t.dataset, catalog, VersionId::parse("2.5")), ConfigError);
}

TEST_CASE("twenty-CVE table against the brute-force oracle")
{
    CHECK(table20::failure() == "");
    auto t = twenty();
    auto catalog = five_versions();
    auto metrics = compute_metrics(t.results, t.dataset, catalog);
    REQUIRE(metrics.size() == 5);
    std::size_t pooled_rep = 0, pooled_rep_den = 0;
    for (int v = 1; v <= 5; ++v) {
        INFO("version " << v);
        auto o = oracle(t, v);
        const auto& m = metrics[static_cast<std::size_t>(v - 1)];
        CHECK(m.version == ver(v));
        CHECK(m.n_verified == o.verified);
        CHECK(m.n_erroneous == o.erroneous);
        CHECK(m.n_unverifiable == o.unverifiable);
        auto e = static_cast<std::int64_t>(o.erroneous);
        CHECK(same(m.er, frac(e, static_cast<std::int64_t>(o.verified + o.erroneous))));
        CHECK(same(m.er_prime, frac(e, static_cast<std::int64_t>(o.verified + o.erroneous + o.unverifiable))));
        CHECK(*m.er_prime <= *m.er);
        CHECK(m.p_error == o.p);
        CHECK(m.f_error == o.f);
        CHECK(m.b_error == o.b);
        CHECK(m.other_error == o.other);
        CHECK(m.p_error + m.f_error + m.b_error + m.other_error == m.n_erroneous);
        CHECK(same(m.foundational.reported_fraction(), frac(static_cast<std::int64_t>(o.rep_found), static_cast<std::int64_t>(o.rep_aff))));
        CHECK(same(m.foundational.verified_fraction(), frac(static_cast<std::int64_t>(o.ver_found), static_cast<std::int64_t>(o.ver_aff))));
        pooled_rep += o.rep_found;
        pooled_rep_den += o.rep_aff;
    }
    auto averages = foundational_averages(foundational_report(t.results, t.dataset, catalog));
    CHECK(same(averages.reported_pooled, frac(static_cast<std::int64_t>(pooled_rep), static_cast<std::int64_t>(pooled_rep_den))));
    CHECK(averages.reported_over_versions.has_value());
}

TEST_CASE("ER' never exceeds ER on random tables")
{
    std::mt19937_64 rng(5);
    auto catalog = five_versions();
    for (int trial = 0; trial < 200; ++trial) {
        auto t = random_table(rng);
        for (const auto& m : compute_metrics(t.results, t.dataset, catalog)) {
            if (m.er && m.er_prime)
                REQUIRE(*m.er_prime <= *m.er);
            REQUIRE(m.p_error + m.f_error + m.b_error + m.other_error == m.n_erroneous);
            if (auto f = m.foundational.reported_fraction())
                REQUIRE((*f >= 0 && *f <= 1));
        }
    }
}

TEST_CASE("partition of the claiming CVEs")
{
    auto t = twenty();
    auto catalog = five_versions();
    for (int v = 1; v <= 5; ++v) {
        auto sets = classify(t.results, t.dataset, catalog, ver(v), true);
        CveSet claiming;
        for (const auto& r : t.dataset)
            if (r.claimed_versions.count(ver(v)))
                claiming.insert(r.cve_id);
        CveSet all = sets.verified;
        all.insert(sets.erroneous.begin(), sets.erroneous.end());
        all.insert(sets.unverifiable.begin(), sets.unverifiable.end());
        CHECK(all == claiming);
        CHECK(all.size() == sets.verified.size() + sets.erroneous.size() + sets.unverifiable.size());
    }
}

TEST_CASE("foundational fractions")
{
    auto catalog = five_versions();
    Table every;
    for (int i = 0; i < 4; ++i)
        every.add("E" + std::to_string(i), vs({ 1, 2, 3, 4, 5 }), vs({ 2 }));
    for (const auto& row : foundational_report(every.results, every.dataset, catalog))
        CHECK(same(row.reported_fraction(), { 1, 1 }));

    Table forty;
    for (int i = 0; i < 2; ++i)
        forty.add("F" + std::to_string(i), vs({ 1, 2 }), vs({ 1, 2 }));
    for (int i = 0; i < 3; ++i)
        forty.add("N" + std::to_string(i), vs({ 2 }), vs({ 2, 3 }));
    auto rows = foundational_report(forty.results, forty.dataset, catalog);
    CHECK(same(rows[1].reported_fraction(), { 2, 5 }));
    CHECK(same(rows[1].verified_fraction(), { 2, 5 }));
    CHECK_FALSE(rows[4].reported_fraction().has_value());

    auto verifiable = foundational_cves(forty.results, forty.dataset, catalog, ver(2), View::verifiable);
    CHECK(verifiable == CveSet { "F0", "F1" });
    CHECK(affecting_cves(forty.results, forty.dataset, ver(3), View::verified) == CveSet { "N0", "N1", "N2" });
    CHECK(affecting_cves(forty.results, forty.dataset, ver(3), View::verifiable).empty());
}

TEST_CASE("index_results demands one result per CVE")
{
    auto t = twenty();
    auto missing = t.results;
    missing.pop_back();
    CHECK_THROWS_AS(index_results(missing, t.dataset), AnalysisError);
    auto doubled = t.results;
    doubled.push_back(t.results.front());
    CHECK_THROWS_AS(index_results(doubled, t.dataset), AnalysisError);
}

TEST_CASE("metrics csv")
{
    auto t = twenty();
    std::ostringstream out;
    write_metrics_csv(out, compute_metrics(t.results, t.dataset, five_versions()));
    auto text = out.str();
    CHECK(text.rfind("version,release_date,n_verified,n_erroneous,n_unverifiable,er,er_exact,", 0) == 0);
    CHECK(text.find("\n3.0,2010-05-01,6,8,3,") != std::string::npos);
    CHECK(text.find(",4/7,") != std::string::npos);
    CHECK(std::count(text.begin(), text.end(), '\n') == 6);
}

TEST_CASE("monthly buckets")
{
    auto t0 = Date::parse("2010-01-01");
    CHECK(month_index(t0, t0) == 0);
    CHECK(month_index(t0, t0.plus_days(30)) == 0);
    CHECK(month_index(t0, t0.plus_days(31)) == 1);
    CHECK(month_index(t0, t0.plus_days(365)) == 11);
    CHECK(month_index(t0, t0.plus_days(-5)) == 0);
    CHECK(month_count(t0, t0) == 0);
    CHECK(month_count(t0, t0.plus_days(1)) == 1);
    CHECK(month_count(t0, t0.plus_days(61)) == 3);

    std::map<std::string, Date> dates { { "A", t0.plus_days(3) }, { "B", t0.plus_days(40) }, { "C", t0.plus_days(45) },
        { "D", t0.plus_days(-10) }, { "E", t0.plus_days(400) } };
    std::vector<std::string> warnings;
    auto s = monthly_series(ver(1), { "A", "B", "C", "D", "E" }, dates, t0, t0.plus_days(100), &warnings);
    CHECK(s.counts == std::vector<std::uint64_t> { 2, 2, 0, 0 });
    CHECK(s.cumulative == std::vector<std::uint64_t> { 2, 4, 4, 4 });
    CHECK(warnings.size() == 2);

    auto tail = s.slice(1);
    CHECK(tail.counts == std::vector<std::uint64_t> { 2, 0, 0 });
    CHECK(tail.cumulative == std::vector<std::uint64_t> { 4, 4, 4 });

    CHECK_THROWS_AS(monthly_series(ver(1), { "Z" }, dates, t0, t0.plus_days(100)), AnalysisError);
    CHECK(monthly_series(ver(1), { "A" }, dates, t0, t0).counts.empty());
}

TEST_CASE("discovery dates and horizon")
{
    Dataset d { { "A", vs({ 1 }), {}, Date::parse("2011-01-01") }, { "B", vs({ 1 }), {}, std::nullopt },
        { "C", vs({ 1 }), {}, Date::parse("2012-05-01") } };
    auto dates = discovery_dates(d);
    CHECK(dates.size() == 2);
    CHECK(dataset_horizon(d) == Date::parse("2012-05-01"));
    CHECK_FALSE(dataset_horizon({}).has_value());
    CHECK(to_string(View::verified) == "verified");
}
