#include "briervar/simlab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace briervar {

BinningScheme ArtificialScheme::natural_bins() {
    // Forecast values are 0.05, 0.15, ..., 0.45 and 1; one bin around each.
    return BinningScheme({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 1.0});
}

TrueComponents true_components() {
    return TrueComponents{27.0 / 800.0, 7.0 / 240.0, 21.0 / 100.0};
}

ForecastSeries sample_trial(std::size_t n, Rng& rng) {
    if (n < 1) throw std::invalid_argument("sample_trial needs n >= 1");
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t d = rng.below(6);
        p[i] = ArtificialScheme::forecast[d];
        y[i] = rng.bernoulli(ArtificialScheme::event_prob[d]) ? 1 : 0;
    }
    return ForecastSeries(std::move(p), std::move(y));
}

TrialRecord run_single_trial(std::size_t n, std::uint64_t master_seed,
                             std::uint64_t trial_index) {
    Rng rng(master_seed, trial_index);
    const ForecastSeries series = sample_trial(n, rng);
    const CountSummary counts = summarize(series, ArtificialScheme::natural_bins());
    const Decomposition plain = decompose_traditional(counts);
    const Decomposition corrected = decompose_bias_corrected(counts);
    const VarianceSet var = variance_estimates(counts);

    TrialRecord rec;
    rec.trial = trial_index;
    rec.estimates = {plain.reliability,     plain.resolution,     plain.uncertainty,
                     corrected.reliability, corrected.resolution, corrected.uncertainty};
    rec.variances = {var.reliability,     var.resolution,     var.uncertainty,
                     *var.reliability_bc, *var.resolution_bc, *var.uncertainty_bc};
    return rec;
}

std::vector<TrialRecord> run_experiment(std::size_t trials, std::size_t n, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("run_experiment needs trials >= 1");
    if (n < 2) throw std::invalid_argument("run_experiment needs n >= 2");
    std::vector<TrialRecord> records(trials);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (long long i = 0; i < static_cast<long long>(trials); ++i)
        records[static_cast<std::size_t>(i)] =
            run_single_trial(n, seed, static_cast<std::uint64_t>(i));
    return records;
}

std::vector<TrialRecord> run_experiment_serial(std::size_t trials, std::size_t n,
                                               std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("run_experiment needs trials >= 1");
    if (n < 2) throw std::invalid_argument("run_experiment needs n >= 2");
    std::vector<TrialRecord> records(trials);
    for (std::size_t i = 0; i < trials; ++i) records[i] = run_single_trial(n, seed, i);
    return records;
}

TrialSummary summarize_trials(std::span<const TrialRecord> records,
                              const TrueComponents& truth) {
    if (records.size() < 2) throw std::invalid_argument("summarize_trials needs >= 2 records");
    const double m = static_cast<double>(records.size());
    const std::array<double, kComponents> truths = {truth.reliability, truth.resolution,
                                                    truth.uncertainty, truth.reliability,
                                                    truth.resolution,  truth.uncertainty};
    TrialSummary out;
    out.trials = records.size();
    for (std::size_t k = 0; k < kComponents; ++k) {
        double mean = 0.0;
        for (const auto& r : records) mean += r.estimates[k];
        mean /= m;
        ComponentStats s;
        for (const auto& r : records) {
            const double dev = r.estimates[k] - mean;
            s.sample_variance += dev * dev;
            s.mean_estimated_variance += r.variances[k];
            const double err = r.estimates[k] - truths[k];
            s.mean_squared_error += err * err;
            s.mean_bias += err;
        }
        s.sample_variance /= m;
        s.mean_estimated_variance /= m;
        s.mean_squared_error /= m;
        s.mean_bias /= m;
        out.stats[k] = s;
    }
    return out;
}

std::array<std::size_t, kComponents> coverage(std::span<const TrialRecord> records,
                                              const TrueComponents& truth, double k) {
    if (!(k > 0.0)) throw std::invalid_argument("coverage needs k > 0");
    const std::array<double, kComponents> truths = {truth.reliability, truth.resolution,
                                                    truth.uncertainty, truth.reliability,
                                                    truth.resolution,  truth.uncertainty};
    std::array<std::size_t, kComponents> hits{};
    for (const auto& r : records) {
        for (std::size_t c = 0; c < kComponents; ++c) {
            const double half_width = k * std::sqrt(r.variances[c]);
            if (std::fabs(r.estimates[c] - truths[c]) <= half_width) ++hits[c];
        }
    }
    return hits;
}

double fit_loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("slope fit needs matching inputs of size >= 2");
    const double m = static_cast<double>(x.size());
    double mean_lx = 0.0, mean_ly = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mean_lx += std::log(x[i]);
        mean_ly += std::log(y[i]);
    }
    mean_lx /= m;
    mean_ly /= m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mean_lx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - mean_ly);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit needs at least two distinct x");
    return sxy / sxx;
}

ConvergenceResult convergence_study(std::span<const std::size_t> n_grid, std::size_t trials,
                                    std::uint64_t seed) {
    std::vector<std::size_t> grid(n_grid.begin(), n_grid.end());
    std::vector<std::size_t> distinct = grid;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    if (distinct.size() < 3)
        throw std::invalid_argument("convergence study needs >= 3 distinct grid sizes");
    if (distinct.front() == 0 ||
        static_cast<double>(distinct.back()) < 10.0 * static_cast<double>(distinct.front()))
        throw std::invalid_argument("convergence grid must span at least one decade");
    if (trials < 2) throw std::invalid_argument("convergence study needs trials >= 2");

    ConvergenceResult out;
    out.n_grid = grid;
    out.mean_abs_diff.resize(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) {
        // Independent substream block per grid point.
        const std::uint64_t block_seed = mix64(seed ^ mix64(grid[g]));
        const std::vector<TrialRecord> records = run_experiment(trials, grid[g], block_seed);
        const double m = static_cast<double>(records.size());
        for (std::size_t c = 0; c < kComponents; ++c) {
            double mean = 0.0;
            for (const auto& r : records) mean += r.estimates[c];
            mean /= m;
            double sample_var = 0.0;
            for (const auto& r : records) {
                const double dev = r.estimates[c] - mean;
                sample_var += dev * dev;
            }
            sample_var /= m;
            double abs_diff = 0.0;
            for (const auto& r : records) abs_diff += std::fabs(sample_var - r.variances[c]);
            out.mean_abs_diff[g][c] = abs_diff / m;
        }
    }

    std::vector<double> xs(grid.size());
    for (std::size_t g = 0; g < grid.size(); ++g) xs[g] = static_cast<double>(grid[g]);
    std::vector<double> ys(grid.size());
    for (std::size_t c = 0; c < kComponents; ++c) {
        for (std::size_t g = 0; g < grid.size(); ++g) ys[g] = out.mean_abs_diff[g][c];
        out.slopes[c] = fit_loglog_slope(xs, ys);
    }
    return out;
}

}  // namespace briervar
