#include "briervar/ar1.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "briervar/normal.hpp"
#include "briervar/rng.hpp"

namespace briervar {
namespace {

constexpr std::size_t kTerms = 5;

std::array<double, kTerms> design_row(std::int64_t day) {
    const double w = SeasonalModel::angular_frequency * static_cast<double>(day);
    return {1.0, std::cos(w), std::sin(w), std::cos(2.0 * w), std::sin(2.0 * w)};
}

// Gaussian elimination with partial pivoting on the 5x5 normal equations.
// Throws when a pivot collapses relative to the matrix scale.
std::array<double, kTerms> solve_normal_equations(std::array<std::array<double, kTerms>, kTerms> m,
                                                  std::array<double, kTerms> rhs) {
    double scale = 0.0;
    for (const auto& row : m)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    for (std::size_t col = 0; col < kTerms; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < kTerms; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
        if (std::fabs(m[pivot][col]) <= 1e-12 * scale)
            throw std::domain_error("seasonal fit: design matrix is rank deficient");
        std::swap(m[col], m[pivot]);
        std::swap(rhs[col], rhs[pivot]);
        for (std::size_t r = col + 1; r < kTerms; ++r) {
            const double f = m[r][col] / m[col][col];
            for (std::size_t k = col; k < kTerms; ++k) m[r][k] -= f * m[col][k];
            rhs[r] -= f * rhs[col];
        }
    }
    std::array<double, kTerms> beta{};
    for (std::size_t i = kTerms; i-- > 0;) {
        double v = rhs[i];
        for (std::size_t k = i + 1; k < kTerms; ++k) v -= m[i][k] * beta[k];
        beta[i] = v / m[i][i];
    }
    return beta;
}

double sample_sd(std::span<const double> values) {
    if (values.empty()) return 0.0;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(values.size()));
}

SweepRow evaluate_threshold(const AnomalySeries& test_anoms, const Ar1Model& ar1,
                            double threshold, const BinningScheme& scheme) {
    std::vector<double> p;
    std::vector<int> y;
    p.reserve(test_anoms.value.size());
    y.reserve(test_anoms.value.size());
    std::size_t skipped = 0;
    for (std::size_t i = 0; i < test_anoms.value.size(); ++i) {
        // A forecast needs yesterday's anomaly; skip days after a gap.
        if (i == 0 || test_anoms.day[i] != test_anoms.day[i - 1] + 1) {
            ++skipped;
            continue;
        }
        p.push_back(exceedance_probability(ar1, test_anoms.value[i - 1], threshold));
        y.push_back(test_anoms.value[i] > threshold ? 1 : 0);
    }
    if (p.size() < 2)
        throw std::domain_error("threshold sweep: fewer than two usable test days");

    const ForecastSeries series(std::move(p), std::move(y));
    const CountSummary counts = summarize(series, scheme);
    SweepRow row;
    row.threshold = threshold;
    row.brier = empirical_brier(series);
    row.traditional = decompose_traditional(counts);
    row.bias_corrected = decompose_bias_corrected(counts);
    row.consistency_corrected = consistency_correct(counts);
    row.variances = variance_estimates(counts);
    row.n_used = series.size();
    row.n_skipped = skipped;
    return row;
}

SweepResult sweep_impl(const DailySeries& train, const DailySeries& test,
                       std::span<const double> thresholds, std::size_t bins, bool parallel) {
    if (thresholds.empty()) throw std::invalid_argument("threshold sweep: no thresholds given");
    SweepResult out;
    out.seasonal = fit_seasonal(train);
    const AnomalySeries train_anoms = anomalies(train, out.seasonal);

    // With sigma = 0 generation the seasonal fit explains the series exactly
    // and the anomalies are pure round-off; forecasting from them would be
    // degenerate (every probability 0 or 1 by numerical accident).
    const double temp_scale = sample_sd(train.temps());
    if (sample_sd(train_anoms.value) <= 1e-9 * std::max(1.0, temp_scale))
        throw std::domain_error(
            "threshold sweep: training anomalies are numerically zero; "
            "sigma = 0 forecasts are degenerate");

    out.ar1 = fit_ar1(train_anoms);
    out.n_train = train.size();
    const AnomalySeries test_anoms = anomalies(test, out.seasonal);
    const BinningScheme scheme = BinningScheme::equal_width(bins);

    out.rows.resize(thresholds.size());
    if (parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (long long i = 0; i < static_cast<long long>(thresholds.size()); ++i)
            out.rows[static_cast<std::size_t>(i)] =
                evaluate_threshold(test_anoms, out.ar1, thresholds[i], scheme);
    } else {
        for (std::size_t i = 0; i < thresholds.size(); ++i)
            out.rows[i] = evaluate_threshold(test_anoms, out.ar1, thresholds[i], scheme);
    }
    return out;
}

}  // namespace

DailySeries::DailySeries(std::vector<std::int64_t> days, std::vector<double> temps)
    : days_(std::move(days)), temps_(std::move(temps)) {
    if (days_.empty()) throw std::invalid_argument("daily series must not be empty");
    if (days_.size() != temps_.size())
        throw std::invalid_argument("daily series: day/temperature size mismatch");
    for (std::size_t i = 1; i < days_.size(); ++i) {
        if (days_[i] <= days_[i - 1])
            throw std::invalid_argument("day indices must be strictly increasing (row " +
                                        std::to_string(i + 1) + ")");
        if (days_[i] != days_[i - 1] + 1) ++gaps_;
    }
    for (double t : temps_)
        if (!std::isfinite(t)) throw std::invalid_argument("non-finite temperature value");
}

double SeasonalModel::value(std::int64_t day) const {
    const auto row = design_row(day);
    double v = 0.0;
    for (std::size_t k = 0; k < kTerms; ++k) v += beta[k] * row[k];
    return v;
}

SeasonalModel fit_seasonal(const DailySeries& series) {
    if (series.size() < kTerms)
        throw std::domain_error("seasonal fit needs at least five observations");
    std::array<std::array<double, kTerms>, kTerms> xtx{};
    std::array<double, kTerms> xty{};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const auto row = design_row(series.days()[i]);
        const double t = series.temps()[i];
        for (std::size_t r = 0; r < kTerms; ++r) {
            for (std::size_t c = r; c < kTerms; ++c) xtx[r][c] += row[r] * row[c];
            xty[r] += row[r] * t;
        }
    }
    for (std::size_t r = 1; r < kTerms; ++r)
        for (std::size_t c = 0; c < r; ++c) xtx[r][c] = xtx[c][r];
    SeasonalModel model;
    model.beta = solve_normal_equations(xtx, xty);
    return model;
}

AnomalySeries anomalies(const DailySeries& series, const SeasonalModel& model) {
    AnomalySeries out;
    out.day.assign(series.days().begin(), series.days().end());
    out.value.resize(series.size());
    for (std::size_t i = 0; i < series.size(); ++i)
        out.value[i] = series.temps()[i] - model.value(out.day[i]);
    return out;
}

Ar1Model fit_ar1(const AnomalySeries& series) {
    const std::size_t n = series.value.size();
    if (n < 3) throw std::domain_error("AR(1) fit needs at least three consecutive observations");
    double mean = 0.0;
    for (double v : series.value) mean += v;
    mean /= static_cast<double>(n);

    double c0_sum = 0.0;
    for (double v : series.value) c0_sum += (v - mean) * (v - mean);

    double c1_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (series.day[i] != series.day[i - 1] + 1) continue;  // gap: no lag-1 pair
        c1_sum += (series.value[i - 1] - mean) * (series.value[i] - mean);
        ++pairs;
    }
    if (pairs < 2) throw std::domain_error("AR(1) fit needs at least three consecutive observations");
    if (c0_sum == 0.0)
        throw std::domain_error("AR(1) fit: constant anomaly series (sigma = 0)");

    Ar1Model model;
    model.alpha = c1_sum / c0_sum;  // textbook lag-1 autocorrelation
    if (!(std::fabs(model.alpha) < 1.0))
        throw std::domain_error("AR(1) fit: |alpha| >= 1, process not stationary");
    const double c0 = c0_sum / static_cast<double>(n);
    model.sigma = std::sqrt(c0 * (1.0 - model.alpha * model.alpha));
    return model;
}

double exceedance_probability(const Ar1Model& model, double previous_anomaly,
                              double threshold) {
    if (!(model.sigma > 0.0))
        throw std::domain_error("exceedance forecast degenerate: sigma must be positive");
    if (!(std::fabs(model.alpha) < 1.0))
        throw std::domain_error("exceedance forecast needs |alpha| < 1");
    return 1.0 - gaussian_cdf(threshold, model.alpha * previous_anomaly, model.sigma);
}

DailySeries generate_synthetic(const SeasonalModel& seasonal, const Ar1Model& ar1,
                               std::int64_t days, std::uint64_t seed, std::int64_t start_day) {
    if (days < 1) throw std::invalid_argument("synthetic series needs at least one day");
    if (!(std::fabs(ar1.alpha) < 1.0))
        throw std::invalid_argument("synthetic series needs |alpha| < 1");
    if (ar1.sigma < 0.0) throw std::invalid_argument("synthetic series needs sigma >= 0");

    Rng rng(seed);
    const double stationary_sd = ar1.sigma / std::sqrt(1.0 - ar1.alpha * ar1.alpha);
    double anomaly = stationary_sd * rng.gaussian();

    std::vector<std::int64_t> day_index(static_cast<std::size_t>(days));
    std::vector<double> temps(static_cast<std::size_t>(days));
    for (std::int64_t i = 0; i < days; ++i) {
        const std::int64_t day = start_day + i;
        day_index[static_cast<std::size_t>(i)] = day;
        temps[static_cast<std::size_t>(i)] = seasonal.value(day) + anomaly;
        anomaly = ar1.alpha * anomaly + ar1.sigma * rng.gaussian();
    }
    return DailySeries(std::move(day_index), std::move(temps));
}

SweepResult threshold_sweep(const DailySeries& train, const DailySeries& test,
                            std::span<const double> thresholds, std::size_t bins) {
    return sweep_impl(train, test, thresholds, bins, true);
}

SweepResult threshold_sweep_serial(const DailySeries& train, const DailySeries& test,
                                   std::span<const double> thresholds, std::size_t bins) {
    return sweep_impl(train, test, thresholds, bins, false);
}

}  // namespace briervar
