#include "vercheck/vdm/vdm.hpp"

#include "vercheck/core/error.hpp"
#include "vercheck/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <set>
#include <tuple>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

namespace vercheck::vdm {

namespace {

std::vector<VdmModel> build_registry()
{
    std::vector<VdmModel> models;
    models.push_back({ "AML", "B/(B*C*exp(-A*B*t)+1)", { "A", "B", "C" }, ParamSpace::log,
        [](double t, std::span<const double> p) { return p[1] / (p[1] * p[2] * std::exp(-p[0] * p[1] * t) + 1.0); } });
    models.push_back({ "AT", "(k/gamma)*ln(gamma*t)", { "k", "gamma" }, ParamSpace::log,
        [](double t, std::span<const double> p) {
            if (t <= 0)
                return -std::numeric_limits<double>::infinity();
            return p[0] / p[1] * std::log(p[1] * t);
        } });
    models.push_back({ "LN", "A*t+B", { "A", "B" }, ParamSpace::linear,
        [](double t, std::span<const double> p) { return p[0] * t + p[1]; } });
    models.push_back({ "LP", "b0*ln(1+b1*t)", { "b0", "b1" }, ParamSpace::log,
        [](double t, std::span<const double> p) { return p[0] * std::log1p(p[1] * t); } });
    models.push_back({ "RE", "N*(1-exp(-lambda*t))", { "N", "lambda" }, ParamSpace::log,
        [](double t, std::span<const double> p) { return p[0] * -std::expm1(-p[1] * t); } });
    models.push_back({ "RQ", "A*t^2+B*t", { "A", "B" }, ParamSpace::linear,
        [](double t, std::span<const double> p) { return p[0] * t * t + p[1] * t; } });
    return models;
}

constexpr double expected_floor = 1e-6;
constexpr double infeasible = 1e100;

struct Problem {
    const VdmModel* model;
    std::span<const double> t;
    std::span<const double> y;
    double scale; // tolerance for monotonicity checks
};

std::vector<double> natural(const VdmModel& model, const gsl_vector* x)
{
    std::vector<double> p(model.param_count());
    for (std::size_t i = 0; i < p.size(); ++i) {
        double v = gsl_vector_get(x, i);
        p[i] = model.space == ParamSpace::log ? std::exp(v) : v;
    }
    return p;
}

// Sum of squared errors, or a large penalty outside the admissible region
// (negative or decreasing Omega on the fitted points).
double objective(const Problem& problem, std::span<const double> p)
{
    double sse = 0;
    double previous = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < problem.t.size(); ++i) {
        double omega = problem.model->eval(problem.t[i], p);
        if (!std::isfinite(omega) || omega < -1e-9 * problem.scale || omega < previous - 1e-9 * problem.scale)
            return infeasible;
        previous = omega;
        double d = problem.y[i] - omega;
        sse += d * d;
    }
    return std::isfinite(sse) ? sse : infeasible;
}

double gsl_objective(const gsl_vector* x, void* data)
{
    const auto& problem = *static_cast<const Problem*>(data);
    for (std::size_t i = 0; i < x->size; ++i)
        if (!std::isfinite(gsl_vector_get(x, i)) || std::abs(gsl_vector_get(x, i)) > 700)
            return infeasible;
    auto p = natural(*problem.model, x);
    return objective(problem, p);
}

// Ordinary least squares for the two linear models, used as one start.
std::optional<std::vector<double>> linear_solution(const VdmModel& model, std::span<const double> t, std::span<const double> y)
{
    // basis functions f1, f2 with Omega = a*f1 + b*f2
    auto f1 = [&](double x) { return model.name == "LN" ? x : x * x; };
    auto f2 = [&](double x) { return model.name == "LN" ? 1.0 : x; };
    double s11 = 0, s12 = 0, s22 = 0, r1 = 0, r2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double a = f1(t[i]), b = f2(t[i]);
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        r1 += a * y[i];
        r2 += b * y[i];
    }
    double det = s11 * s22 - s12 * s12;
    if (std::abs(det) < 1e-300)
        return std::nullopt;
    return std::vector<double> { (r1 * s22 - r2 * s12) / det, (s11 * r2 - s12 * r1) / det };
}

// Deterministic start grid scaled to the data.
std::vector<std::vector<double>> start_grid(const VdmModel& model, std::span<const double> t, std::span<const double> y)
{
    double t_min = std::max(t.front(), 1e-9);
    double t_max = std::max(t.back(), t_min);
    double y_max = std::max(*std::max_element(y.begin(), y.end()), 1.0);
    double y_min = std::max(*std::min_element(y.begin(), y.end()), 0.0);
    std::vector<std::vector<double>> starts;

    if (model.name == "AML") {
        for (double b_scale : { 1.0, 1.5, 3.0 })
            for (double steep : { 0.5, 3.0, 10.0 })
                for (double c : { 0.01, 1.0, 100.0 }) {
                    double B = y_max * b_scale;
                    starts.push_back({ steep / (B * t_max), B, c / B });
                }
    } else if (model.name == "AT") {
        for (double g : { 1.0, 2.0, 10.0 })
            for (double k_scale : { 0.5, 1.0, 2.0 }) {
                double gamma = g / t_min;
                double ln = std::log(gamma * t_max);
                double k = y_max * gamma / std::max(ln, 1e-3) * k_scale;
                starts.push_back({ k, gamma });
            }
    } else if (model.name == "LP") {
        for (double reach : { 0.1, 1.0, 10.0, 100.0 })
            for (double b_scale : { 0.5, 1.0, 2.0 }) {
                double b1 = reach / t_max;
                starts.push_back({ y_max / std::log1p(reach) * b_scale, b1 });
            }
    } else if (model.name == "RE") {
        for (double reach : { 0.1, 0.5, 1.0, 3.0, 10.0 })
            for (double n_scale : { 0.8, 1.0, 1.5 }) {
                double lambda = reach / t_max;
                starts.push_back({ y_max / -std::expm1(-reach) * n_scale, lambda });
            }
    } else if (model.name == "LN") {
        if (auto ls = linear_solution(model, t, y))
            starts.push_back(*ls);
        for (double a : { 0.5, 1.0, 2.0 })
            for (double b : { 0.0, y_min })
                starts.push_back({ a * y_max / t_max, b });
    } else if (model.name == "RQ") {
        if (auto ls = linear_solution(model, t, y))
            starts.push_back(*ls);
        for (double share : { 0.0, 0.5, 1.0 })
            for (double s : { 0.5, 1.0 }) {
                double a = share * s * y_max / (t_max * t_max);
                double b = (1.0 - share) * s * y_max / t_max;
                starts.push_back({ a, b });
            }
    }
    return starts;
}

struct Minimum {
    std::vector<double> params; // natural space
    double value = infeasible;
};

Minimum nelder_mead(const Problem& problem, const std::vector<double>& start, const FitOptions& options)
{
    const auto& model = *problem.model;
    const auto dim = model.param_count();
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(dim), gsl_vector_free);
    std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(dim), gsl_vector_free);
    for (std::size_t i = 0; i < dim; ++i) {
        if (model.space == ParamSpace::log) {
            gsl_vector_set(x.get(), i, std::log(start[i]));
            gsl_vector_set(step.get(), i, 0.5);
        } else {
            gsl_vector_set(x.get(), i, start[i]);
            gsl_vector_set(step.get(), i, 0.1 * std::abs(start[i]) + 1e-3 * problem.scale);
        }
    }

    gsl_multimin_function fn { &gsl_objective, dim, const_cast<Problem*>(&problem) };
    Minimum best;
    // Restart from the best vertex until a full run no longer improves.
    for (int round = 0; round < 4; ++round) {
        std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
            gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim), gsl_multimin_fminimizer_free);
        if (gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get()) != GSL_SUCCESS)
            break;
        double previous = solver->fval;
        unsigned stalled = 0;
        for (unsigned it = 0; it < options.max_iterations; ++it) {
            if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS)
                break;
            double f = solver->fval;
            double change = std::abs(previous - f) / std::max(std::abs(f), 1e-300);
            previous = f;
            // a shrink step may leave the best value unchanged for a while
            stalled = change < options.relative_tolerance ? stalled + 1 : 0;
            if (stalled > 4 * dim || gsl_multimin_fminimizer_size(solver.get()) < 1e-13 || f == 0.0)
                break;
        }
        double value = solver->fval;
        bool improved = value < best.value * (1.0 - options.relative_tolerance);
        if (value < best.value) {
            best.value = value;
            best.params = natural(model, solver->x);
            gsl_vector_memcpy(x.get(), solver->x);
        }
        if (!improved || value == 0.0)
            break;
        for (std::size_t i = 0; i < dim; ++i)
            gsl_vector_set(step.get(), i, model.space == ParamSpace::log ? 0.05 : 0.01 * std::abs(gsl_vector_get(x.get(), i)) + 1e-6 * problem.scale);
    }
    return best;
}

struct GslErrorsOff {
    GslErrorsOff() { gsl_set_error_handler_off(); }
};

}

const std::vector<VdmModel>& model_registry()
{
    static const std::vector<VdmModel> models = build_registry();
    return models;
}

const VdmModel& find_model(std::string_view name)
{
    for (const auto& model : model_registry())
        if (model.name == name)
            return model;
    throw ConfigError(fmt::format("unknown VDM model '{}'", name));
}

FitRecord fit_points(const VdmModel& model, std::span<const double> t, std::span<const double> y, const FitOptions& options)
{
    static const GslErrorsOff errors_off;
    if (t.size() != y.size())
        throw AnalysisError("fit: time and value series differ in length");
    if (t.size() < model.param_count() + 2)
        throw AnalysisError(fmt::format("fit: {} needs at least {} points, got {}", model.name, model.param_count() + 2, t.size()));

    double scale = std::max(1.0, *std::max_element(y.begin(), y.end()));
    Problem problem { &model, t, y, scale };

    Minimum best;
    for (const auto& start : start_grid(model, t, y)) {
        bool usable = std::all_of(start.begin(), start.end(), [&](double v) {
            return std::isfinite(v) && (model.space == ParamSpace::linear || v > 0);
        });
        if (!usable)
            continue;
        auto found = nelder_mead(problem, start, options);
        if (found.value < best.value)
            best = std::move(found);
    }

    FitRecord record;
    record.model = model.name;
    record.df = t.size() - model.param_count() - 1;
    if (best.value >= infeasible) {
        record.params.assign(model.param_count(), std::numeric_limits<double>::quiet_NaN());
        record.sse = std::numeric_limits<double>::quiet_NaN();
        record.chi2 = std::numeric_limits<double>::quiet_NaN();
        return record;
    }
    record.params = best.params;
    record.sse = best.value;

    std::vector<double> expected(t.size());
    bool all_clipped = true;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double omega = model.eval(t[i], record.params);
        if (omega > expected_floor)
            all_clipped = false;
        expected[i] = std::max(omega, expected_floor);
    }
    if (all_clipped) {
        // expected counts carry no information, chi-square is undefined
        record.chi2 = std::numeric_limits<double>::quiet_NaN();
        return record;
    }
    auto test = stats::chi_square_gof(y, expected, model.param_count());
    record.chi2 = test.statistic;
    record.p_value = test.p_value;
    record.converged = true;
    return record;
}

FitRecord fit(const VdmModel& model, const analysis::MonthlySeries& series, std::size_t from_month,
    std::optional<std::size_t> horizon, const FitOptions& options)
{
    if (series.cumulative.empty())
        throw AnalysisError(fmt::format("fit: empty series for {}", series.version.label()));
    auto last = std::min(horizon.value_or(series.cumulative.size() - 1), series.cumulative.size() - 1);
    if (from_month > last)
        throw AnalysisError(fmt::format("fit: no months between {} and {}", from_month, last));
    std::vector<double> t, y;
    for (auto m = from_month; m <= last; ++m) {
        t.push_back(static_cast<double>(m + 1));
        y.push_back(static_cast<double>(series.cumulative[m]));
    }
    auto record = fit_points(model, t, y, options);
    record.version = series.version;
    record.month = last;
    return record;
}

std::vector<FitRecord> fit_all(const std::vector<analysis::MonthlySeries>& series, std::size_t from_month,
    bool horizon_sweep, unsigned jobs, const FitOptions& options)
{
    struct Task {
        const VdmModel* model;
        const analysis::MonthlySeries* series;
        std::size_t horizon;
    };
    std::vector<Task> tasks;
    for (const auto& model : model_registry()) {
        for (const auto& s : series) {
            if (s.cumulative.empty())
                continue;
            auto last = s.cumulative.size() - 1;
            auto first_horizon = from_month + model.param_count() + 1; // param_count + 2 points
            if (last < first_horizon)
                continue;
            if (horizon_sweep) {
                for (auto h = first_horizon; h <= last; ++h)
                    tasks.push_back({ &model, &s, h });
            } else {
                tasks.push_back({ &model, &s, last });
            }
        }
    }
    std::vector<FitRecord> out(tasks.size());
    parallel_for(tasks.size(), jobs, [&](std::size_t i) {
        out[i] = fit(*tasks[i].model, *tasks[i].series, from_month, tasks[i].horizon, options);
    });
    std::stable_sort(out.begin(), out.end(), [](const FitRecord& a, const FitRecord& b) {
        return std::tie(a.model, a.version, a.month) < std::tie(b.model, b.version, b.month);
    });
    return out;
}

double quality(std::span<const FitRecord> records)
{
    if (records.empty())
        throw AnalysisError("quality: no fit records");
    std::size_t good = 0;
    for (const auto& r : records)
        if (r.converged && r.p_value && *r.p_value >= well_fit_threshold)
            ++good;
    return static_cast<double>(good) / static_cast<double>(records.size());
}

std::vector<QualityPoint> quality_curves(const std::vector<FitRecord>& records)
{
    std::map<std::pair<std::string, std::size_t>, std::vector<FitRecord>> groups;
    for (const auto& r : records)
        groups[{ r.model, r.month }].push_back(r);
    std::vector<QualityPoint> out;
    for (const auto& [key, group] : groups)
        out.push_back({ key.first, key.second, quality(group), group.size() });
    return out;
}

Comparison compare_datasets(const std::vector<FitRecord>& a, const std::vector<FitRecord>& b, stats::Alternative alternative)
{
    std::map<std::pair<std::string, std::size_t>, double> qa, qb;
    for (const auto& p : quality_curves(a))
        qa[{ p.model, p.month }] = p.quality;
    for (const auto& p : quality_curves(b))
        qb[{ p.model, p.month }] = p.quality;

    std::map<std::string, std::vector<double>> diffs;
    std::vector<double> pooled;
    for (const auto& [key, value] : qa) {
        auto it = qb.find(key);
        if (it == qb.end())
            continue;
        diffs[key.first].push_back(value - it->second);
        pooled.push_back(value - it->second);
    }
    if (pooled.empty())
        throw AnalysisError("compare: the two data sets share no (model, month) pair");

    Comparison out;
    auto run = [&](const std::string& label, const std::vector<double>& d) {
        if (std::all_of(d.begin(), d.end(), [](double x) { return x == 0.0; })) {
            out.warnings.push_back(fmt::format("{}: all quality differences are zero, p set to 1", label));
            stats::TestResult degenerate;
            degenerate.alternative = alternative;
            degenerate.p_value = 1.0;
            return degenerate;
        }
        return stats::wilcoxon_signed_rank(d, 0.0, alternative);
    };
    for (const auto& [model, d] : diffs) {
        out.per_model[model] = run(model, d);
        out.pairs[model] = d.size();
    }
    out.pooled = run("pooled", pooled);
    out.pooled_pairs = pooled.size();
    return out;
}

namespace {

std::string number(double v)
{
    if (std::isnan(v))
        return "";
    return fmt::format("{:.10g}", v);
}

}

void write_fits_csv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<FitRecord>>>& datasets)
{
    out << "dataset,model,version,month,params,sse,chi2,df,p_value,converged\n";
    for (const auto& [label, records] : datasets) {
        for (const auto& r : records) {
            const auto& model = find_model(r.model);
            std::string params;
            for (std::size_t i = 0; i < r.params.size(); ++i)
                params += fmt::format("{}{}={}", i ? ";" : "", model.param_names[i], number(r.params[i]));
            out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", label, r.model, r.version.label(), r.month, params,
                number(r.sse), number(r.chi2), r.df, r.p_value ? number(*r.p_value) : std::string(),
                r.converged ? "true" : "false");
        }
    }
}

void write_quality_csv(std::ostream& out, const std::vector<std::pair<std::string, std::vector<QualityPoint>>>& datasets)
{
    out << "dataset,model,month,quality,fits\n";
    for (const auto& [label, curve] : datasets)
        for (const auto& p : curve)
            out << fmt::format("{},{},{},{:.6f},{}\n", label, p.model, p.month, p.quality, p.fits);
}

void write_comparison_csv(std::ostream& out, const Comparison& comparison)
{
    out << "model,pairs,statistic,p_value,method,alternative\n";
    auto row = [&](const std::string& model, std::size_t pairs, const stats::TestResult& r) {
        out << fmt::format("{},{},{},{},{},{}\n", model, pairs, number(r.statistic), number(r.p_value),
            stats::to_string(r.method), stats::to_string(r.alternative));
    };
    for (const auto& [model, result] : comparison.per_model)
        row(model, comparison.pairs.at(model), result);
    row("pooled", comparison.pooled_pairs, comparison.pooled);
}

}
