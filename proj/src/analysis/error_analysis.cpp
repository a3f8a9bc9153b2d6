#include "vercheck/analysis/error_analysis.hpp"

#include "vercheck/core/error.hpp"

#include <cmath>
#include <functional>

#include <fmt/format.h>

namespace vercheck::analysis {

std::string ratio_string(const Ratio& r)
{
    return fmt::format("{}/{}", r.numerator(), r.denominator());
}

double ratio_value(const Ratio& r)
{
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

std::map<std::string, const VerificationResult*> index_results(const std::vector<VerificationResult>& results,
    const Dataset& dataset)
{
    std::map<std::string, const VerificationResult*> out;
    for (const auto& result : results)
        if (!out.emplace(result.cve_id, &result).second)
            throw AnalysisError(fmt::format("duplicate verification result for {}", result.cve_id));
    for (const auto& record : dataset)
        if (!out.contains(record.cve_id))
            throw AnalysisError(fmt::format("no verification result for {}", record.cve_id));
    return out;
}

VersionSets classify(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, const VersionId& version, bool strict)
{
    if (!catalog.contains_official(version))
        throw ConfigError(fmt::format("version {} is not an official catalog version", version.label()));
    auto index = index_results(results, dataset);

    VersionSets sets;
    sets.version = version;
    for (const auto& record : dataset) {
        const auto& result = *index.at(record.cve_id);
        bool claimed = record.claimed_versions.contains(version);
        if (!result.verifiable()) {
            if (claimed)
                sets.unverifiable.insert(record.cve_id);
            continue;
        }
        bool verified = result.verified_versions().contains(version);
        if (verified && (claimed || !strict))
            sets.verified.insert(record.cve_id);
        if (claimed && !verified)
            sets.erroneous.insert(record.cve_id);
    }
    return sets;
}

ErrorRates error_rates(std::size_t verified, std::size_t erroneous, std::size_t unverifiable)
{
    ErrorRates rates;
    auto e = static_cast<std::int64_t>(erroneous);
    auto denominator = static_cast<std::int64_t>(verified) + e;
    if (denominator > 0)
        rates.er = Ratio(e, denominator);
    auto optimistic = denominator + static_cast<std::int64_t>(unverifiable);
    if (optimistic > 0)
        rates.er_prime = Ratio(e, optimistic);
    return rates;
}

ErrorRates error_rates(const VersionSets& sets)
{
    return error_rates(sets.verified.size(), sets.erroneous.size(), sets.unverifiable.size());
}

Taxonomy error_taxonomy(const CveSet& erroneous, const std::vector<VerificationResult>& results, const VersionId& version)
{
    std::map<std::string, const VerificationResult*> index;
    for (const auto& result : results)
        index.emplace(result.cve_id, &result);

    Taxonomy out;
    for (const auto& cve : erroneous) {
        auto it = index.find(cve);
        if (it == index.end())
            throw AnalysisError(fmt::format("no verification result for {}", cve));
        const auto& versions = it->second->verified_versions();
        if (versions.empty())
            out.beta.insert(cve);
        else if (version < *versions.begin())
            out.past.insert(cve);
        else if (version > *versions.rbegin())
            out.future.insert(cve);
        else
            out.other.insert(cve);
    }
    return out;
}

namespace {

std::optional<Ratio> fraction(std::size_t count, std::size_t total)
{
    if (total == 0)
        return std::nullopt;
    return Ratio(static_cast<std::int64_t>(count), static_cast<std::int64_t>(total));
}

}

std::optional<Ratio> FoundationalRow::reported_fraction() const
{
    return fraction(reported, reported_affecting);
}

std::optional<Ratio> FoundationalRow::verified_fraction() const
{
    return fraction(verified, verified_affecting);
}

std::vector<FoundationalRow> foundational_report(const std::vector<VerificationResult>& results,
    const Dataset& dataset, const VersionCatalog& catalog)
{
    auto first = catalog.first_version();
    if (!first)
        throw ConfigError("foundational report needs at least one official version");
    auto index = index_results(results, dataset);

    std::vector<FoundationalRow> rows;
    for (const auto& entry : catalog.official()) {
        FoundationalRow row;
        row.version = entry.version;
        for (const auto& record : dataset) {
            if (record.claimed_versions.contains(entry.version)) {
                ++row.reported_affecting;
                if (record.claimed_versions.contains(*first))
                    ++row.reported;
            }
            const auto& result = *index.at(record.cve_id);
            if (result.verifiable() && result.verified_versions().contains(entry.version)) {
                ++row.verified_affecting;
                if (result.verified_versions().contains(*first))
                    ++row.verified;
            }
        }
        rows.push_back(row);
    }
    return rows;
}

FoundationalAverages foundational_averages(const std::vector<FoundationalRow>& rows)
{
    FoundationalAverages out;
    double reported_sum = 0, verified_sum = 0;
    std::size_t reported_n = 0, verified_n = 0;
    std::size_t reported_count = 0, reported_total = 0, verified_count = 0, verified_total = 0;
    for (const auto& row : rows) {
        if (auto f = row.reported_fraction()) {
            reported_sum += ratio_value(*f);
            ++reported_n;
        }
        if (auto f = row.verified_fraction()) {
            verified_sum += ratio_value(*f);
            ++verified_n;
        }
        reported_count += row.reported;
        reported_total += row.reported_affecting;
        verified_count += row.verified;
        verified_total += row.verified_affecting;
    }
    if (reported_n > 0)
        out.reported_over_versions = reported_sum / static_cast<double>(reported_n);
    if (verified_n > 0)
        out.verified_over_versions = verified_sum / static_cast<double>(verified_n);
    out.reported_pooled = fraction(reported_count, reported_total);
    out.verified_pooled = fraction(verified_count, verified_total);
    return out;
}

std::vector<VersionMetrics> compute_metrics(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, bool strict)
{
    auto foundational = foundational_report(results, dataset, catalog);
    std::vector<VersionMetrics> out;
    std::size_t i = 0;
    for (const auto& entry : catalog.official()) {
        auto sets = classify(results, dataset, catalog, entry.version, strict);
        auto rates = error_rates(sets);
        auto taxonomy = error_taxonomy(sets.erroneous, results, entry.version);

        VersionMetrics m;
        m.version = entry.version;
        m.release_date = entry.release_date;
        m.n_verified = sets.verified.size();
        m.n_erroneous = sets.erroneous.size();
        m.n_unverifiable = sets.unverifiable.size();
        m.er = rates.er;
        m.er_prime = rates.er_prime;
        m.p_error = taxonomy.past.size();
        m.f_error = taxonomy.future.size();
        m.b_error = taxonomy.beta.size();
        m.other_error = taxonomy.other.size();
        m.foundational = foundational[i++];
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

std::string decimal(const std::optional<Ratio>& r)
{
    return r ? fmt::format("{:.6f}", ratio_value(*r)) : std::string();
}

std::string exact(const std::optional<Ratio>& r)
{
    return r ? ratio_string(*r) : std::string();
}

}

void write_metrics_csv(std::ostream& out, const std::vector<VersionMetrics>& metrics)
{
    out << "version,release_date,n_verified,n_erroneous,n_unverifiable,er,er_exact,er_prime,er_prime_exact,"
           "p_error,f_error,b_error,other_error,"
           "foundational_reported,reported_affecting,foundational_reported_fraction,"
           "foundational_verified,verified_affecting,foundational_verified_fraction\n";
    for (const auto& m : metrics) {
        const auto& f = m.foundational;
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", m.version.label(),
            m.release_date.to_string(), m.n_verified, m.n_erroneous, m.n_unverifiable, decimal(m.er), exact(m.er),
            decimal(m.er_prime), exact(m.er_prime), m.p_error, m.f_error, m.b_error, m.other_error, f.reported,
            f.reported_affecting, decimal(f.reported_fraction()), f.verified, f.verified_affecting,
            decimal(f.verified_fraction()));
    }
}

MonthlySeries MonthlySeries::slice(std::size_t from_month) const
{
    MonthlySeries out;
    out.version = version;
    out.t0 = t0;
    if (from_month < counts.size()) {
        out.counts.assign(counts.begin() + static_cast<long>(from_month), counts.end());
        out.cumulative.assign(cumulative.begin() + static_cast<long>(from_month), cumulative.end());
    }
    return out;
}

std::size_t month_index(const Date& t0, const Date& date)
{
    auto days = date.days_since(t0);
    if (days <= 0)
        return 0;
    return static_cast<std::size_t>(std::floor(static_cast<double>(days) / days_per_month));
}

std::size_t month_count(const Date& t0, const Date& horizon)
{
    if (horizon.days_since(t0) <= 0)
        return 0;
    return month_index(t0, horizon) + 1;
}

MonthlySeries monthly_series(const VersionId& version, const CveSet& cves, const std::map<std::string, Date>& discovery,
    const Date& t0, const Date& horizon, std::vector<std::string>* warnings)
{
    MonthlySeries series;
    series.version = version;
    series.t0 = t0;
    series.counts.assign(month_count(t0, horizon), 0);

    auto warn = [&](std::string text) {
        if (warnings)
            warnings->push_back(std::move(text));
    };
    for (const auto& cve : cves) {
        auto it = discovery.find(cve);
        if (it == discovery.end())
            throw AnalysisError(fmt::format("{} has no discovery date", cve));
        const auto& date = it->second;
        if (date > horizon) {
            warn(fmt::format("{}: discovered {} after the horizon {}, ignored", cve, date.to_string(), horizon.to_string()));
            continue;
        }
        if (series.counts.empty())
            continue;
        if (date < t0)
            warn(fmt::format("{}: discovered {} before the release of {} ({}), counted in month 0", cve,
                date.to_string(), version.label(), t0.to_string()));
        ++series.counts[std::min(month_index(t0, date), series.counts.size() - 1)];
    }
    std::uint64_t running = 0;
    for (auto c : series.counts) {
        running += c;
        series.cumulative.push_back(running);
    }
    return series;
}

std::string_view to_string(View view)
{
    return view == View::verifiable ? "verifiable" : "verified";
}

namespace {

CveSet select(const std::vector<VerificationResult>& results, const Dataset& dataset, View view,
    const std::function<bool(const VersionSet&)>& keep)
{
    auto index = index_results(results, dataset);
    CveSet out;
    for (const auto& record : dataset) {
        const auto& result = *index.at(record.cve_id);
        if (!result.verifiable())
            continue;
        const auto& versions = view == View::verified ? result.verified_versions() : record.claimed_versions;
        if (keep(versions))
            out.insert(record.cve_id);
    }
    return out;
}

}

CveSet affecting_cves(const std::vector<VerificationResult>& results, const Dataset& dataset, const VersionId& version,
    View view)
{
    return select(results, dataset, view, [&](const VersionSet& v) { return v.contains(version); });
}

CveSet foundational_cves(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, const VersionId& version, View view)
{
    auto first = catalog.first_version();
    if (!first)
        throw ConfigError("catalog has no official version");
    return select(results, dataset, view, [&](const VersionSet& v) { return v.contains(version) && v.contains(*first); });
}

std::map<std::string, Date> discovery_dates(const Dataset& dataset)
{
    std::map<std::string, Date> out;
    for (const auto& record : dataset)
        if (record.published)
            out.emplace(record.cve_id, *record.published);
    return out;
}

std::optional<Date> dataset_horizon(const Dataset& dataset)
{
    std::optional<Date> out;
    for (const auto& record : dataset)
        if (record.published && (!out || *record.published > *out))
            out = record.published;
    return out;
}

}
