#include "briervar/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace briervar {
namespace {

struct Components {
    double rel = 0.0;
    double res = 0.0;
    double unc = 0.0;
    double correction = 0.0;  // the shared bin sum subtracted by both primed terms
};

Components traditional_parts(const CountSummary& counts) {
    if (counts.n < 1) throw std::domain_error("decomposition needs n >= 1");
    const double n = static_cast<double>(counts.n);
    const double y_total = static_cast<double>(counts.events_total);
    Components out;
    double rel_sum = 0.0, res_sum = 0.0, corr_sum = 0.0;
    for (std::size_t d = 0; d < counts.bins(); ++d) {
        const auto ad = counts.count[d];
        if (ad <= 0) continue;  // empty bins contribute nothing
        const double a = static_cast<double>(ad);
        const double b = static_cast<double>(counts.events[d]);
        const double c = counts.prob_sum[d];
        rel_sum += (b - c) * (b - c) / a;
        const double diff = b / a - y_total / n;
        res_sum += a * diff * diff;
        if (ad > 1) corr_sum += b * (a - b) / (a * (a - 1.0));
    }
    out.rel = rel_sum / n;
    out.res = res_sum / n;
    out.unc = y_total * (n - y_total) / (n * n);
    out.correction = corr_sum / n;
    return out;
}

}  // namespace

Decomposition decompose_traditional(const CountSummary& counts) {
    const Components c = traditional_parts(counts);
    return Decomposition{c.rel, c.res, c.unc, EstimatorFamily::traditional, std::nullopt};
}

Decomposition decompose_bias_corrected(const CountSummary& counts) {
    if (counts.n < 2) throw std::domain_error("bias correction undefined for n < 2");
    const Components c = traditional_parts(counts);
    const double n = static_cast<double>(counts.n);
    const double y_total = static_cast<double>(counts.events_total);
    const double unc_shift = y_total * (n - y_total) / (n * n * (n - 1.0));
    return Decomposition{c.rel - c.correction,
                         c.res - c.correction + unc_shift,
                         // written as unc * n/(n-1) so the algebraic identity
                         // with the traditional estimator holds bit for bit
                         c.unc * n / (n - 1.0),
                         EstimatorFamily::bias_corrected,
                         std::nullopt};
}

Decomposition consistency_correct(const CountSummary& counts) {
    if (counts.n < 2) throw std::domain_error("consistency correction undefined for n < 2");
    const Decomposition plain = decompose_traditional(counts);
    const Decomposition corrected = decompose_bias_corrected(counts);

    const double s = plain.reliability - corrected.reliability;
    const double t = corrected.uncertainty - plain.uncertainty;

    // Largest shrink factor that keeps every shifted component in range.
    // A zero denominator means the corresponding constraint cannot be
    // violated by any gamma, so that candidate is left out of the min.
    double gamma = 1.0;
    if (s != 0.0) gamma = std::min(gamma, plain.reliability / s);
    if (s - t != 0.0)
        gamma = std::min(gamma, std::max(plain.resolution / (s - t),
                                         (plain.resolution - 1.0) / (s - t)));
    if (t != 0.0) gamma = std::min(gamma, (1.0 - 4.0 * plain.uncertainty) / (4.0 * t));
    gamma = std::max(gamma, 0.0);  // round-off near zero must not expand the shift

    return Decomposition{plain.reliability - gamma * s,
                         plain.resolution + gamma * (t - s),
                         plain.uncertainty + gamma * t,
                         EstimatorFamily::consistency_corrected,
                         gamma};
}

}  // namespace briervar
