#pragma once

#include "vercheck/analysis/error_analysis.hpp"
#include "vercheck/core/version.hpp"
#include "vercheck/stats/tests.hpp"

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vercheck::vdm {

enum class ParamSpace {
    log, // strictly positive, searched in log space
    linear,
};

/// A vulnerability discovery model: Omega(t) is the expected cumulative
/// number of vulnerabilities t months after release.
struct VdmModel {
    std::string name;
    std::string formula;
    std::vector<std::string> param_names;
    ParamSpace space = ParamSpace::log;
    std::function<double(double t, std::span<const double> params)> eval;

    std::size_t param_count() const { return param_names.size(); }
};

/// AML, AT, LN, LP, RE, RQ in that order.
const std::vector<VdmModel>& model_registry();
/// Throws ConfigError for an unknown name.
const VdmModel& find_model(std::string_view name);

struct FitRecord {
    std::string model;
    VersionId version;
    std::size_t month = 0; // months since release at the evaluation horizon
    std::vector<double> params;
    double sse = 0.0;
    double chi2 = 0.0;
    std::size_t df = 0;
    std::optional<double> p_value; // absent when not converged
    bool converged = false;
};

struct FitOptions {
    unsigned max_iterations = 500; // per start
    double relative_tolerance = 1e-9;
};

/// Least-squares fit of Omega to (t, y) points. Throws AnalysisError when
/// there are fewer than param_count + 2 points.
FitRecord fit_points(const VdmModel& model, std::span<const double> t, std::span<const double> y,
    const FitOptions& options = {});

/// Fits the cumulative series over months [from_month, horizon] with
/// t = month + 1. Without a horizon the whole series is used.
FitRecord fit(const VdmModel& model, const analysis::MonthlySeries& series, std::size_t from_month = 6,
    std::optional<std::size_t> horizon = std::nullopt, const FitOptions& options = {});

/// Fits every model to every series: either at the last month only, or at
/// every horizon that leaves enough points. Output is sorted by model,
/// version and month.
std::vector<FitRecord> fit_all(const std::vector<analysis::MonthlySeries>& series, std::size_t from_month,
    bool horizon_sweep, unsigned jobs = 1, const FitOptions& options = {});

inline constexpr double well_fit_threshold = 0.05;

/// Share of records with p >= 0.05; non-converged fits count as bad fits.
double quality(std::span<const FitRecord> records);

struct QualityPoint {
    std::string model;
    std::size_t month = 0;
    double quality = 0.0;
    std::size_t fits = 0;
};

/// Quality per (model, month) across versions.
std::vector<QualityPoint> quality_curves(const std::vector<FitRecord>& records);

struct Comparison {
    std::map<std::string, stats::TestResult> per_model;
    std::map<std::string, std::size_t> pairs;
    stats::TestResult pooled;
    std::size_t pooled_pairs = 0;
    std::vector<std::string> warnings;
};

/// Paired signed-rank test of quality between two data sets. Quality is
/// computed per (model, month) and paired on that key; differences are
/// a - b. When every difference is zero the test reports p = 1 and a
/// warning. Throws AnalysisError when nothing pairs up.
Comparison compare_datasets(const std::vector<FitRecord>& a, const std::vector<FitRecord>& b,
    stats::Alternative alternative = stats::Alternative::two_sided);

/// Tables with a leading "dataset" column, one block per labelled data set.
void write_fits_csv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<FitRecord>>>& datasets);
void write_quality_csv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<QualityPoint>>>& datasets);
void write_comparison_csv(std::ostream& out, const Comparison& comparison);

}
