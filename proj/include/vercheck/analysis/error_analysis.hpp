#pragma once

#include "vercheck/core/catalog.hpp"
#include "vercheck/core/cve.hpp"
#include "vercheck/core/verification.hpp"

#include <boost/rational.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

namespace vercheck::analysis {

using Ratio = boost::rational<std::int64_t>;

std::string ratio_string(const Ratio& r); // "3/4"
double ratio_value(const Ratio& r);

using CveSet = std::set<std::string>;

struct VersionSets {
    VersionId version;
    CveSet verified; // v in V'(cve)
    CveSet erroneous; // verifiable, v in V(cve), v not in V'(cve)
    CveSet unverifiable; // v in V(cve), no evidence possible
};

/// Index of results by CVE identifier. Throws AnalysisError unless every
/// dataset CVE has exactly one result.
std::map<std::string, const VerificationResult*> index_results(const std::vector<VerificationResult>& results,
    const Dataset& dataset);

/// With `strict`, verified(v) only keeps CVEs that also claimed v.
VersionSets classify(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, const VersionId& version, bool strict = false);

struct ErrorRates {
    std::optional<Ratio> er; // absent when there is nothing to divide by
    std::optional<Ratio> er_prime;
};

ErrorRates error_rates(std::size_t verified, std::size_t erroneous, std::size_t unverifiable);
ErrorRates error_rates(const VersionSets& sets);

struct Taxonomy {
    CveSet past; // v < min V'
    CveSet future; // v > max V'
    CveSet beta; // V' empty
    CveSet other; // v falls in a gap inside V'
};

Taxonomy error_taxonomy(const CveSet& erroneous, const std::vector<VerificationResult>& results, const VersionId& version);

struct FoundationalRow {
    VersionId version;
    std::size_t reported = 0; // v and the first version in V(cve)
    std::size_t reported_affecting = 0; // v in V(cve)
    std::size_t verified = 0;
    std::size_t verified_affecting = 0;

    std::optional<Ratio> reported_fraction() const;
    std::optional<Ratio> verified_fraction() const;
};

/// One row per official version. Unverifiable CVEs only count in the
/// reported view.
std::vector<FoundationalRow> foundational_report(const std::vector<VerificationResult>& results,
    const Dataset& dataset, const VersionCatalog& catalog);

struct FoundationalAverages {
    std::optional<double> reported_over_versions; // mean of per-version fractions
    std::optional<Ratio> reported_pooled; // sum of counts over sum of denominators
    std::optional<double> verified_over_versions;
    std::optional<Ratio> verified_pooled;
};

FoundationalAverages foundational_averages(const std::vector<FoundationalRow>& rows);

struct VersionMetrics {
    VersionId version;
    Date release_date;
    std::size_t n_verified = 0;
    std::size_t n_erroneous = 0;
    std::size_t n_unverifiable = 0;
    std::optional<Ratio> er;
    std::optional<Ratio> er_prime;
    std::size_t p_error = 0;
    std::size_t f_error = 0;
    std::size_t b_error = 0;
    std::size_t other_error = 0;
    FoundationalRow foundational;
};

std::vector<VersionMetrics> compute_metrics(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, bool strict = false);

/// Column order is fixed; see docs/formats.md.
void write_metrics_csv(std::ostream& out, const std::vector<VersionMetrics>& metrics);

inline constexpr double days_per_month = 30.44;

struct MonthlySeries {
    VersionId version;
    Date t0;
    std::vector<std::uint64_t> counts; // index = months since t0
    std::vector<std::uint64_t> cumulative;

    /// Drops the first `from_month` months; cumulative values keep counting
    /// from t0.
    MonthlySeries slice(std::size_t from_month) const;
};

std::size_t month_index(const Date& t0, const Date& date);
std::size_t month_count(const Date& t0, const Date& horizon);

/// Buckets discovery dates by month since t0 up to `horizon`. Dates before
/// t0 land in month 0 and dates after the horizon are ignored; both add a
/// warning.
MonthlySeries monthly_series(const VersionId& version, const CveSet& cves, const std::map<std::string, Date>& discovery,
    const Date& t0, const Date& horizon, std::vector<std::string>* warnings = nullptr);

/// The two data sets of verifiable CVEs: claimed versions V, or verified
/// versions V'. Unverifiable CVEs belong to neither.
enum class View { verifiable, verified };

std::string_view to_string(View view);

/// Verifiable CVEs affecting `version` in the chosen view.
CveSet affecting_cves(const std::vector<VerificationResult>& results, const Dataset& dataset, const VersionId& version,
    View view);

/// The subset of affecting_cves that also affect the first catalog version.
CveSet foundational_cves(const std::vector<VerificationResult>& results, const Dataset& dataset,
    const VersionCatalog& catalog, const VersionId& version, View view);

/// Publication dates of the dataset CVEs that have one.
std::map<std::string, Date> discovery_dates(const Dataset& dataset);

/// Latest publication date in the dataset.
std::optional<Date> dataset_horizon(const Dataset& dataset);

}
