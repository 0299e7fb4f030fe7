#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace briervar {

/// Paired forecast probabilities p in [0,1] and binary outcomes y in {0,1}.
/// Validated at construction; immutable afterwards.
class ForecastSeries {
public:
    /// Throws std::invalid_argument on empty input, size mismatch, p outside
    /// [0,1] (or non-finite), or y not in {0,1}.
    ForecastSeries(std::vector<double> probs, std::vector<int> outcomes);

    std::size_t size() const noexcept { return probs_.size(); }
    std::span<const double> probs() const noexcept { return probs_; }
    std::span<const int> outcomes() const noexcept { return outcomes_; }

private:
    std::vector<double> probs_;
    std::vector<int> outcomes_;
};

/// Partition of [0,1] into D bins: the first bin is closed [e0,e1], the rest
/// are half-open to the left (e_{d-1}, e_d]. Bins are numbered 1..D.
class BinningScheme {
public:
    /// edges must satisfy e0 = 0 < e1 < ... < eD = 1 with D >= 1.
    explicit BinningScheme(std::vector<double> edges);

    /// D bins of width 1/D with edges d/D.
    static BinningScheme equal_width(std::size_t bins);

    std::size_t bins() const noexcept { return edges_.size() - 1; }
    std::span<const double> edges() const noexcept { return edges_; }

    /// 1-based index of the unique bin containing p. A probability exactly on
    /// an interior edge belongs to the lower bin. Throws std::domain_error for
    /// p outside [0,1].
    std::size_t bin_index(double p) const;

    friend bool operator==(const BinningScheme& a, const BinningScheme& b) {
        return a.edges_ == b.edges_;
    }

private:
    std::vector<double> edges_;
};

/// Per-bin sufficient statistics of a binned forecast series. Carries the
/// probability square and probability-times-outcome sums in addition to the
/// plain column sums so the exact Gram matrix of the stacked indicator matrix
/// is reconstructible in O(D^2) without retaining the raw rows.
struct CountSummary {
    BinningScheme scheme;
    std::vector<std::int64_t> count;        ///< cases per bin (A column sums)
    std::vector<std::int64_t> events;       ///< events per bin (B column sums)
    std::vector<double> prob_sum;           ///< sum of p per bin (C column sums)
    std::vector<double> prob_sq_sum;        ///< sum of p^2 per bin
    std::vector<double> prob_event_sum;     ///< sum of p*y per bin
    std::int64_t events_total = 0;          ///< total events Y
    std::int64_t n = 0;                     ///< total cases N

    std::size_t bins() const noexcept { return scheme.bins(); }
};

/// One pass over the series; output is invariant under permutation of rows.
CountSummary summarize(const ForecastSeries& series, const BinningScheme& scheme);

/// Elementwise sum of two summaries over the same scheme (throws otherwise).
CountSummary merge(const CountSummary& lhs, const CountSummary& rhs);

struct BrierScore {
    double score = 0.0;
    /// Standard error of the mean of squared residuals; absent for n < 2.
    std::optional<double> standard_error;
};

/// Mean squared difference between forecast probability and outcome.
BrierScore empirical_brier(const ForecastSeries& series);

}  // namespace briervar
