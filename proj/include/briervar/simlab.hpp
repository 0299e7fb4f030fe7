#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "briervar/decompose.hpp"
#include "briervar/forecast.hpp"
#include "briervar/rng.hpp"
#include "briervar/variance.hpp"

namespace briervar {

/// Index order of the six estimators in TrialRecord arrays and summaries.
enum Component : std::size_t {
    kRel = 0,
    kRes = 1,
    kUnc = 2,
    kRelBc = 3,
    kResBc = 4,
    kUncBc = 5,
};
inline constexpr std::size_t kComponents = 6;
inline constexpr std::array<const char*, kComponents> kComponentNames = {
    "rel", "res", "unc", "rel_bc", "res_bc", "unc_bc"};

/// Synthetic forecasting setup with known components: the event probability
/// is drawn uniformly from six values, the issued forecast equals it except
/// in the last case, where the forecast is 1 (deliberately miscalibrated).
struct ArtificialScheme {
    static constexpr std::array<double, 6> event_prob = {0.05, 0.15, 0.25, 0.35, 0.45, 0.55};
    static constexpr std::array<double, 6> forecast = {0.05, 0.15, 0.25, 0.35, 0.45, 1.0};

    /// Six bins whose edges isolate the six forecast values, so binning
    /// adds no estimation error.
    static BinningScheme natural_bins();
};

struct TrueComponents {
    double reliability;
    double resolution;
    double uncertainty;
};

/// Exact analytic components of the artificial scheme.
TrueComponents true_components();

struct TrialRecord {
    std::uint64_t trial = 0;                      ///< substream index
    std::array<double, kComponents> estimates{};  ///< rel,res,unc,rel',res',unc'
    std::array<double, kComponents> variances{};  ///< matching variance estimates
};

/// n independent draws from the artificial scheme. Deterministic in the rng.
ForecastSeries sample_trial(std::size_t n, Rng& rng);

/// One complete trial: sample, bin on the natural edges, decompose, estimate
/// variances. Uses substream (master_seed, trial_index).
TrialRecord run_single_trial(std::size_t n, std::uint64_t master_seed, std::uint64_t trial_index);

/// OpenMP-parallel over trials. Bit-identical to run_experiment_serial for
/// any thread count because every trial owns its own substream.
std::vector<TrialRecord> run_experiment(std::size_t trials, std::size_t n, std::uint64_t seed);

/// Plain-loop reference implementation, kept for tests and benchmarks.
std::vector<TrialRecord> run_experiment_serial(std::size_t trials, std::size_t n,
                                               std::uint64_t seed);

struct ComponentStats {
    double sample_variance = 0.0;          ///< variance of estimates, divisor = trials
    double mean_estimated_variance = 0.0;  ///< average of per-trial variance estimates
    double mean_squared_error = 0.0;       ///< average squared distance to truth
    double mean_bias = 0.0;                ///< average signed distance to truth
};

struct TrialSummary {
    std::size_t trials = 0;
    std::array<ComponentStats, kComponents> stats{};
};

/// Requires at least two records (throws std::invalid_argument).
TrialSummary summarize_trials(std::span<const TrialRecord> records, const TrueComponents& truth);

/// Number of trials whose interval estimate +- k * sqrt(estimated variance)
/// contains the true value, per component.
std::array<std::size_t, kComponents> coverage(std::span<const TrialRecord> records,
                                              const TrueComponents& truth, double k);

/// Least-squares slope of log(y) against log(x).
double fit_loglog_slope(std::span<const double> x, std::span<const double> y);

struct ConvergenceResult {
    std::vector<std::size_t> n_grid;
    /// mean over trials of |sample variance - estimated variance_i|,
    /// one row per grid point.
    std::vector<std::array<double, kComponents>> mean_abs_diff;
    std::array<double, kComponents> slopes{};
};

/// Runs the experiment at every N in n_grid (independent substream blocks per
/// N) and fits the log-log decay rate of the mean absolute difference between
/// the sample variance and the per-trial estimated variances. n_grid needs at
/// least three distinct values spanning a factor of ten.
ConvergenceResult convergence_study(std::span<const std::size_t> n_grid, std::size_t trials,
                                    std::uint64_t seed);

}  // namespace briervar
