#include "briervar/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace briervar {
namespace {

// Kahan compensated accumulator. The float sums in CountSummary feed
// identities that are checked at 1e-12; compensation keeps the accumulation
// error at a few ulps regardless of n.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

ForecastSeries::ForecastSeries(std::vector<double> probs, std::vector<int> outcomes)
    : probs_(std::move(probs)), outcomes_(std::move(outcomes)) {
    if (probs_.empty()) throw std::invalid_argument("forecast series must not be empty");
    if (probs_.size() != outcomes_.size())
        throw std::invalid_argument("forecast series: probability/outcome size mismatch");
    for (std::size_t i = 0; i < probs_.size(); ++i) {
        const double p = probs_[i];
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("forecast probability outside [0,1] at row " +
                                        std::to_string(i + 1));
        if (outcomes_[i] != 0 && outcomes_[i] != 1)
            throw std::invalid_argument("outcome not in {0,1} at row " + std::to_string(i + 1));
    }
}

BinningScheme::BinningScheme(std::vector<double> edges) : edges_(std::move(edges)) {
    if (edges_.size() < 2) throw std::invalid_argument("binning scheme needs at least one bin");
    if (edges_.front() != 0.0 || edges_.back() != 1.0)
        throw std::invalid_argument("bin edges must start at 0 and end at 1");
    for (std::size_t i = 1; i < edges_.size(); ++i) {
        if (!(edges_[i - 1] < edges_[i]))
            throw std::invalid_argument("bin edges must be strictly increasing");
    }
}

BinningScheme BinningScheme::equal_width(std::size_t bins) {
    if (bins == 0) throw std::invalid_argument("binning scheme needs at least one bin");
    std::vector<double> edges(bins + 1);
    for (std::size_t d = 0; d <= bins; ++d)
        edges[d] = static_cast<double>(d) / static_cast<double>(bins);
    return BinningScheme(std::move(edges));
}

std::size_t BinningScheme::bin_index(double p) const {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability outside [0,1]");
    // First interior-or-final edge >= p selects the bin; this places edge
    // values in the lower bin and never misclassifies the way floor(p*D) can.
    const auto it = std::lower_bound(edges_.begin() + 1, edges_.end(), p);
    return static_cast<std::size_t>(it - edges_.begin());
}

CountSummary summarize(const ForecastSeries& series, const BinningScheme& scheme) {
    const std::size_t bins = scheme.bins();
    CountSummary out{scheme,
                     std::vector<std::int64_t>(bins, 0),
                     std::vector<std::int64_t>(bins, 0),
                     std::vector<double>(bins, 0.0),
                     std::vector<double>(bins, 0.0),
                     std::vector<double>(bins, 0.0),
                     0,
                     0};
    std::vector<KahanSum> c(bins), s2(bins), spy(bins);
    const auto probs = series.probs();
    const auto outcomes = series.outcomes();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double p = probs[i];
        const std::size_t d = scheme.bin_index(p) - 1;
        out.count[d] += 1;
        out.events[d] += outcomes[i];
        c[d].add(p);
        s2[d].add(p * p);
        if (outcomes[i]) spy[d].add(p);
        out.events_total += outcomes[i];
    }
    out.n = static_cast<std::int64_t>(probs.size());
    for (std::size_t d = 0; d < bins; ++d) {
        out.prob_sum[d] = c[d].sum;
        out.prob_sq_sum[d] = s2[d].sum;
        out.prob_event_sum[d] = spy[d].sum;
    }
    return out;
}

CountSummary merge(const CountSummary& lhs, const CountSummary& rhs) {
    if (!(lhs.scheme == rhs.scheme))
        throw std::invalid_argument("cannot merge summaries over different binning schemes");
    CountSummary out = lhs;
    for (std::size_t d = 0; d < out.bins(); ++d) {
        out.count[d] += rhs.count[d];
        out.events[d] += rhs.events[d];
        out.prob_sum[d] += rhs.prob_sum[d];
        out.prob_sq_sum[d] += rhs.prob_sq_sum[d];
        out.prob_event_sum[d] += rhs.prob_event_sum[d];
    }
    out.events_total += rhs.events_total;
    out.n += rhs.n;
    return out;
}

BrierScore empirical_brier(const ForecastSeries& series) {
    const auto probs = series.probs();
    const auto outcomes = series.outcomes();
    const double n = static_cast<double>(series.size());
    KahanSum sum;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double r = probs[i] - static_cast<double>(outcomes[i]);
        sum.add(r * r);
    }
    BrierScore out;
    out.score = sum.sum / n;
    if (series.size() >= 2) {
        KahanSum dev;
        for (std::size_t i = 0; i < probs.size(); ++i) {
            const double r = probs[i] - static_cast<double>(outcomes[i]);
            const double e = r * r - out.score;
            dev.add(e * e);
        }
        const double sample_var = dev.sum / (n - 1.0);
        out.standard_error = std::sqrt(sample_var / n);
    }
    return out;
}

}  // namespace briervar
