#include "briervar/variance.hpp"

#include <cmath>
#include <stdexcept>

namespace briervar {

StackedVector StackedVector::from_counts(const CountSummary& counts) {
    const std::size_t bins = counts.bins();
    StackedVector out{bins, std::vector<double>(3 * bins + 1, 0.0)};
    for (std::size_t d = 0; d < bins; ++d) {
        out.values[out.a_slot(d)] = static_cast<double>(counts.count[d]);
        out.values[out.b_slot(d)] = static_cast<double>(counts.events[d]);
        out.values[out.c_slot(d)] = counts.prob_sum[d];
    }
    out.values[out.y_slot()] = static_cast<double>(counts.events_total);
    return out;
}

CovarianceMatrix covariance_of_sums(const CountSummary& counts) {
    if (counts.n < 1) throw std::domain_error("covariance needs n >= 1");
    const std::size_t bins = counts.bins();
    const std::size_t dim = 3 * bins + 1;
    const double n = static_cast<double>(counts.n);
    const StackedVector x = StackedVector::from_counts(counts);

    // Gram matrix X^T X of the stacked indicator matrix. Rows touch exactly
    // one bin, so all cross-bin entries vanish and every nonzero entry is one
    // of the per-bin sufficient statistics.
    CovarianceMatrix gram(dim);
    const std::size_t y = x.y_slot();
    for (std::size_t d = 0; d < bins; ++d) {
        const double a = static_cast<double>(counts.count[d]);
        const double b = static_cast<double>(counts.events[d]);
        const double c = counts.prob_sum[d];
        const double s2 = counts.prob_sq_sum[d];
        const double spy = counts.prob_event_sum[d];
        const std::size_t ai = x.a_slot(d), bi = x.b_slot(d), ci = x.c_slot(d);
        gram(ai, ai) = a;
        gram(ai, bi) = gram(bi, ai) = b;
        gram(ai, ci) = gram(ci, ai) = c;
        gram(bi, bi) = b;  // y^2 = y
        gram(bi, ci) = gram(ci, bi) = spy;
        gram(ci, ci) = s2;
        gram(ai, y) = gram(y, ai) = b;
        gram(bi, y) = gram(y, bi) = b;
        gram(ci, y) = gram(y, ci) = spy;
    }
    gram(y, y) = static_cast<double>(counts.events_total);

    // Cov(x) = X^T X - (1/N) x x^T. Dividing one factor first keeps the
    // products at the scale of the result instead of N times larger.
    CovarianceMatrix cov(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double mean_i = x.values[i] / n;
        for (std::size_t j = 0; j < dim; ++j)
            cov(i, j) = gram(i, j) - mean_i * x.values[j];
    }
    return cov;
}

JacobianSet jacobians(const CountSummary& counts) {
    if (counts.n < 1) throw std::domain_error("jacobians need n >= 1");
    const std::size_t bins = counts.bins();
    const std::size_t dim = 3 * bins + 1;
    const double n = static_cast<double>(counts.n);
    const double y_total = static_cast<double>(counts.events_total);
    const double ybar = y_total / n;
    const StackedVector layout{bins, std::vector<double>(dim, 0.0)};

    JacobianSet out{std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0),
                    std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0),
                    std::vector<double>(dim, 0.0), std::vector<double>(dim, 0.0)};

    for (std::size_t d = 0; d < bins; ++d) {
        const auto ad = counts.count[d];
        if (ad <= 0) continue;  // vanishing denominators: all slots stay zero
        const double a = static_cast<double>(ad);
        const double b = static_cast<double>(counts.events[d]);
        const double c = counts.prob_sum[d];
        const std::size_t ai = layout.a_slot(d), bi = layout.b_slot(d), ci = layout.c_slot(d);

        out.reliability[ai] = -(b - c) * (b - c) / (n * a * a);
        out.reliability[bi] = 2.0 * (b - c) / (n * a);
        out.reliability[ci] = -2.0 * (b - c) / (n * a);

        const double diff = b / a - ybar;
        out.resolution[ai] = -diff * (b / a + ybar) / n;
        out.resolution[bi] = 2.0 * diff / n;

        // The bias-corrected C derivative has no (a-1) factor, so it survives
        // singleton bins even though the A and B slots do not.
        out.reliability_bc[ci] = -2.0 * (b - c) / (n * a);
        if (ad > 1) {
            const double am1 = a - 1.0;
            out.reliability_bc[ai] =
                -((b - c) * (b - c) + b * b / am1 - a * b * (a - b) / (am1 * am1)) / (n * a * a);
            out.reliability_bc[bi] = (2.0 * b - 1.0) / (n * am1) - 2.0 * c / (n * a);
            out.resolution_bc[ai] =
                -diff * (b / a + ybar) / n +
                b * ((a - b) * (a - b) - b * (b - 1.0)) / (n * a * a * am1 * am1);
            out.resolution_bc[bi] = 2.0 * diff / n - (a - 2.0 * b) / (n * a * am1);
        }
    }

    // RES does not depend on Y once the column sums are consistent
    // (sum of B equals Y and sum of A equals N), so the slot is exactly zero.
    const std::size_t y = layout.y_slot();
    out.uncertainty[y] = 1.0 / n - 2.0 * y_total / (n * n);
    if (counts.n > 1) {
        out.resolution_bc[y] = (n - 2.0 * y_total) / (n * n * (n - 1.0));
        out.uncertainty_bc[y] = (n - 2.0 * y_total) / (n * (n - 1.0));
    }
    return out;
}

double quadratic_form(std::span<const double> v, const CovarianceMatrix& m) {
    const std::size_t dim = m.dim();
    double total = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        if (v[i] == 0.0) continue;
        double row = 0.0;
        for (std::size_t j = 0; j < dim; ++j) row += m(i, j) * v[j];
        total += v[i] * row;
    }
    return total;
}

VarianceSet variance_estimates(const CountSummary& counts) {
    if (counts.n < 1) throw std::domain_error("variance estimation needs n >= 1");
    const CovarianceMatrix cov = covariance_of_sums(counts);
    const JacobianSet jac = jacobians(counts);

    VarianceSet out;
    auto clamp = [&out](double v) {
        if (v < 0.0) {
            ++out.clamped;
            return 0.0;
        }
        return v;
    };
    out.reliability = clamp(quadratic_form(jac.reliability, cov));
    out.resolution = clamp(quadratic_form(jac.resolution, cov));
    out.uncertainty = clamp(quadratic_form(jac.uncertainty, cov));
    if (counts.n >= 2) {
        out.reliability_bc = clamp(quadratic_form(jac.reliability_bc, cov));
        out.resolution_bc = clamp(quadratic_form(jac.resolution_bc, cov));
        out.uncertainty_bc = clamp(quadratic_form(jac.uncertainty_bc, cov));
    }
    return out;
}

}  // namespace briervar
