#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "briervar/decompose.hpp"
#include "briervar/forecast.hpp"
#include "briervar/variance.hpp"

namespace briervar {

/// Daily observations indexed by integer days since an epoch (day 0 is
/// 1 January 1970 for CSV data). Day indices must be strictly increasing;
/// gaps are allowed and handled downstream.
class DailySeries {
public:
    DailySeries(std::vector<std::int64_t> days, std::vector<double> temps);

    std::size_t size() const noexcept { return days_.size(); }
    std::span<const std::int64_t> days() const noexcept { return days_; }
    std::span<const double> temps() const noexcept { return temps_; }
    std::size_t gaps() const noexcept { return gaps_; }  ///< missing-day runs

private:
    std::vector<std::int64_t> days_;
    std::vector<double> temps_;
    std::size_t gaps_ = 0;
};

/// Second-order trigonometric polynomial seasonal cycle with the fixed
/// angular frequency of the mean Gregorian year.
struct SeasonalModel {
    static constexpr double angular_frequency = 2.0 * 3.14159265358979323846 / 365.2425;
    std::array<double, 5> beta{};  // 1, cos wn, sin wn, cos 2wn, sin 2wn

    double value(std::int64_t day) const;
};

/// First-order autoregression of anomalies: x_{n+1} = alpha x_n + sigma eps.
struct Ar1Model {
    double alpha = 0.0;
    double sigma = 0.0;
};

/// Anomaly values paired with the day indices they belong to.
struct AnomalySeries {
    std::vector<std::int64_t> day;
    std::vector<double> value;
};

/// Ordinary least squares fit of the seasonal cycle. Needs at least five
/// observations on five distinct days; throws std::domain_error when the
/// normal equations are rank deficient.
SeasonalModel fit_seasonal(const DailySeries& series);

/// Observation minus fitted seasonal cycle, day by day.
AnomalySeries anomalies(const DailySeries& series, const SeasonalModel& model);

/// Yule-Walker fit: alpha is the lag-1 autocorrelation (only consecutive-day
/// pairs enter the numerator; gaps are skipped), sigma^2 = c0 (1 - alpha^2)
/// with c0 the sample variance. Throws std::domain_error for a constant
/// series or fewer than three consecutive pairs.
Ar1Model fit_ar1(const AnomalySeries& series);

/// P(next anomaly > threshold | previous anomaly), Gaussian under the AR(1)
/// model. Requires sigma > 0 and |alpha| < 1.
double exceedance_probability(const Ar1Model& model, double previous_anomaly, double threshold);

/// Seasonal cycle plus a seeded AR(1) anomaly path of the given length. The
/// initial anomaly is drawn from the stationary distribution.
DailySeries generate_synthetic(const SeasonalModel& seasonal, const Ar1Model& ar1,
                               std::int64_t days, std::uint64_t seed,
                               std::int64_t start_day = 0);

struct SweepRow {
    double threshold = 0.0;
    BrierScore brier;
    Decomposition traditional;
    Decomposition bias_corrected;
    Decomposition consistency_corrected;
    VarianceSet variances;
    std::size_t n_used = 0;
    std::size_t n_skipped = 0;  ///< test days lacking a previous-day anomaly
};

struct SweepResult {
    SeasonalModel seasonal;  ///< fitted on the training data
    Ar1Model ar1;            ///< fitted on the training anomalies
    std::size_t n_train = 0;
    std::vector<SweepRow> rows;
};

/// Fits seasonal cycle and AR(1) on the training series only, then scores
/// one-day-ahead exceedance forecasts on the test series for every threshold
/// with D equal-width bins. Thresholds are evaluated in parallel; the output
/// is deterministic. Throws std::domain_error when the training anomalies are
/// numerically zero (a sigma = 0 forecast is degenerate).
SweepResult threshold_sweep(const DailySeries& train, const DailySeries& test,
                            std::span<const double> thresholds, std::size_t bins);

/// Plain-loop reference implementation, kept for tests and benchmarks.
SweepResult threshold_sweep_serial(const DailySeries& train, const DailySeries& test,
                                   std::span<const double> thresholds, std::size_t bins);

}  // namespace briervar
