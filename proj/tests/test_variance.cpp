#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "briervar/forecast.hpp"
#include "briervar/rng.hpp"
#include "briervar/variance.hpp"
#include "oracles.hpp"

using namespace briervar;

namespace {

ForecastSeries random_series(Rng& rng, std::size_t n) {
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = rng.uniform();
        y[i] = rng.bernoulli(0.2 + 0.6 * rng.uniform()) ? 1 : 0;
    }
    return ForecastSeries(std::move(p), std::move(y));
}

// Count summaries where every bin is comfortably populated, so no derivative
// formula degenerates: a_d >= 2 and 1 <= b_d <= a_d - 1.
CountSummary random_nondegenerate_counts(Rng& rng, std::size_t bins) {
    const BinningScheme scheme = BinningScheme::equal_width(bins);
    const auto edges = scheme.edges();
    std::vector<double> p;
    std::vector<int> y;
    for (std::size_t d = 0; d < bins; ++d) {
        const std::uint32_t a = 2 + rng.below(20);
        const std::uint32_t b = 1 + rng.below(a - 1);
        for (std::uint32_t i = 0; i < a; ++i) {
            const double lo = edges[d], hi = edges[d + 1];
            p.push_back(lo + (hi - lo) * std::max(rng.uniform(), 1e-3));
            y.push_back(i < b ? 1 : 0);
        }
    }
    return summarize(ForecastSeries(std::move(p), std::move(y)), scheme);
}

// Relative 1e-6, with an absolute floor a little above the round-off noise a
// central difference carries on slots whose true derivative is zero.
bool grad_close(double analytic, double fd) {
    const double diff = std::fabs(analytic - fd);
    return diff <= 1e-6 * std::max(std::fabs(analytic), std::fabs(fd)) || diff <= 1e-9;
}

}  // namespace

TEST_CASE("stacked vector layout") {
    const CountSummary counts =
        summarize(ForecastSeries({0.2, 0.8, 0.8}, {0, 1, 0}), BinningScheme::equal_width(2));
    const StackedVector x = StackedVector::from_counts(counts);
    REQUIRE(x.size() == 7);
    CHECK(x.values[x.a_slot(0)] == 1.0);
    CHECK(x.values[x.a_slot(1)] == 2.0);
    CHECK(x.values[x.b_slot(1)] == 1.0);
    CHECK(x.values[x.c_slot(1)] == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(x.values[x.y_slot()] == 1.0);
}

TEST_CASE("covariance of a constant-row series is the zero matrix") {
    const CountSummary counts =
        summarize(ForecastSeries({0.3, 0.3, 0.3}, {1, 1, 1}), BinningScheme::equal_width(2));
    const CovarianceMatrix cov = covariance_of_sums(counts);
    for (std::size_t i = 0; i < cov.dim(); ++i)
        for (std::size_t j = 0; j < cov.dim(); ++j) CHECK(cov(i, j) == doctest::Approx(0.0));
}

TEST_CASE("covariance matches the explicit two-row case") {
    const ForecastSeries series({0.2, 0.8}, {0, 1});
    const CountSummary counts = summarize(series, BinningScheme::equal_width(2));
    const CovarianceMatrix cov = covariance_of_sums(counts);
    CHECK(cov(0, 0) == doctest::Approx(0.5).epsilon(1e-15));   // Var(A_1) = 1 - 1/2
    CHECK(cov(0, 1) == doctest::Approx(-0.5).epsilon(1e-15));  // Cov(A_1, A_2)
    const CovarianceMatrix brute = oracles::brute_covariance(series, BinningScheme::equal_width(2));
    for (std::size_t i = 0; i < cov.dim(); ++i)
        for (std::size_t j = 0; j < cov.dim(); ++j)
            CHECK(std::fabs(cov(i, j) - brute(i, j)) <= 1e-13);
}

TEST_CASE("covariance equals the brute-force row-matrix product") {
    Rng rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        const std::size_t n = 1 + rng.below(200);
        const BinningScheme scheme = BinningScheme::equal_width(1 + rng.below(10));
        const ForecastSeries series = random_series(rng, n);
        const CovarianceMatrix fast = covariance_of_sums(summarize(series, scheme));
        const CovarianceMatrix brute = oracles::brute_covariance(series, scheme);
        for (std::size_t i = 0; i < fast.dim(); ++i)
            for (std::size_t j = 0; j < fast.dim(); ++j)
                CHECK(std::fabs(fast(i, j) - brute(i, j)) <= 1e-12);
    }
}

TEST_CASE("covariance is symmetric and positive semi-definite") {
    Rng rng(37);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t n = 2 + rng.below(150);
        const CountSummary counts =
            summarize(random_series(rng, n), BinningScheme::equal_width(1 + rng.below(8)));
        const CovarianceMatrix cov = covariance_of_sums(counts);
        double trace = 0.0;
        for (std::size_t i = 0; i < cov.dim(); ++i) {
            trace += cov(i, i);
            CHECK(cov(i, i) >= -1e-12);
            for (std::size_t j = 0; j < i; ++j)
                CHECK(std::fabs(cov(i, j) - cov(j, i)) <= 1e-12);
        }
        for (int probe = 0; probe < 10; ++probe) {
            std::vector<double> v(cov.dim());
            double norm2 = 0.0;
            for (auto& vi : v) {
                vi = 2.0 * rng.uniform() - 1.0;
                norm2 += vi * vi;
            }
            CHECK(quadratic_form(v, cov) >= -1e-9 * norm2 * std::max(trace, 1.0));
        }
    }
}

TEST_CASE("jacobian spot values") {
    // stationary point of unc at climatology 1/2
    const CountSummary even =
        summarize(ForecastSeries({0.1, 0.9, 0.4, 0.6}, {1, 0, 1, 0}), BinningScheme::equal_width(2));
    const JacobianSet even_jac = jacobians(even);
    CHECK(even_jac.uncertainty[6] == doctest::Approx(0.0));

    // perfectly calibrated bin: dREL/dC vanishes where B = C
    const CountSummary cal =
        summarize(ForecastSeries({0.5, 0.5}, {1, 0}), BinningScheme::equal_width(1));
    const JacobianSet cal_jac = jacobians(cal);
    CHECK(cal_jac.reliability[2] == doctest::Approx(0.0));

    // empty bin: every slot for that bin is zero
    const CountSummary gap =
        summarize(ForecastSeries({0.1, 0.1, 0.9, 0.9}, {0, 1, 1, 1}), BinningScheme::equal_width(3));
    const JacobianSet gap_jac = jacobians(gap);
    const StackedVector layout = StackedVector::from_counts(gap);
    CHECK(gap.count[1] == 0);
    for (const auto& grad : {gap_jac.reliability, gap_jac.resolution, gap_jac.reliability_bc,
                             gap_jac.resolution_bc}) {
        CHECK(grad[layout.a_slot(1)] == 0.0);
        CHECK(grad[layout.b_slot(1)] == 0.0);
        CHECK(grad[layout.c_slot(1)] == 0.0);
    }

    // dRES'/dY = (N - 2Y)/(N^2 (N-1)) at N = 10, Y = 3
    std::vector<double> p(10, 0.5);
    std::vector<int> y(10, 0);
    y[0] = y[1] = y[2] = 1;
    const CountSummary ten = summarize(ForecastSeries(p, y), BinningScheme::equal_width(1));
    const JacobianSet ten_jac = jacobians(ten);
    CHECK(ten_jac.resolution_bc[3] == doctest::Approx(4.0 / 900.0).epsilon(1e-14));
}

TEST_CASE("resolution jacobian has an identically zero climatology slot") {
    Rng rng(41);
    for (int rep = 0; rep < 50; ++rep) {
        const CountSummary counts = random_nondegenerate_counts(rng, 2 + rng.below(9));
        const JacobianSet jac = jacobians(counts);
        CHECK(jac.resolution[3 * counts.bins()] == 0.0);
    }
}

TEST_CASE("analytic jacobians match central finite differences") {
    Rng rng(43);
    for (int rep = 0; rep < 40; ++rep) {
        const std::size_t bins = 2 + rng.below(9);
        const CountSummary counts = random_nondegenerate_counts(rng, bins);
        const StackedVector x = StackedVector::from_counts(counts);
        const double n = static_cast<double>(counts.n);
        const JacobianSet jac = jacobians(counts);
        const double h = 1e-5;

        const std::vector<std::pair<const std::vector<double>*,
                                    std::function<double(std::span<const double>)>>>
            cases = {
                {&jac.reliability, [&](std::span<const double> v) { return oracles::rel_of(v, bins, n); }},
                {&jac.resolution, [&](std::span<const double> v) { return oracles::res_of(v, bins, n); }},
                {&jac.uncertainty, [&](std::span<const double> v) { return oracles::unc_of(v, bins, n); }},
                {&jac.reliability_bc,
                 [&](std::span<const double> v) { return oracles::rel_bc_of(v, bins, n); }},
                {&jac.resolution_bc,
                 [&](std::span<const double> v) { return oracles::res_bc_of(v, bins, n); }},
                {&jac.uncertainty_bc,
                 [&](std::span<const double> v) { return oracles::unc_bc_of(v, bins, n); }},
            };
        for (const auto& [analytic, f] : cases) {
            const std::vector<double> fd = oracles::fd_gradient(f, x.values, h);
            for (std::size_t i = 0; i < fd.size(); ++i) CHECK(grad_close((*analytic)[i], fd[i]));
        }
    }
}

TEST_CASE("variance estimates on degenerate and hand-checked inputs") {
    // constant data: no sampling variation at all
    const CountSummary constant =
        summarize(ForecastSeries({0.7, 0.7, 0.7}, {1, 1, 1}), BinningScheme::equal_width(2));
    const VarianceSet flat = variance_estimates(constant);
    CHECK(flat.reliability == 0.0);
    CHECK(flat.resolution == 0.0);
    CHECK(flat.uncertainty == 0.0);
    CHECK(*flat.reliability_bc == 0.0);

    // four-point series against the materialize-everything oracle
    const ForecastSeries four({0.2, 0.8, 0.8, 0.4}, {0, 1, 0, 1});
    const BinningScheme scheme = BinningScheme::equal_width(2);
    const CountSummary counts = summarize(four, scheme);
    const VarianceSet vs = variance_estimates(counts);

    const CovarianceMatrix brute = oracles::brute_covariance(four, scheme);
    const StackedVector x = StackedVector::from_counts(counts);
    const double n = static_cast<double>(counts.n);
    const auto fd_variance = [&](const std::function<double(std::span<const double>)>& f) {
        const std::vector<double> grad = oracles::fd_gradient(f, x.values, 1e-5);
        return quadratic_form(grad, brute);
    };
    CHECK(vs.reliability ==
          doctest::Approx(fd_variance([&](std::span<const double> v) {
              return oracles::rel_of(v, 2, n);
          })).epsilon(1e-6));
    CHECK(vs.resolution ==
          doctest::Approx(fd_variance([&](std::span<const double> v) {
              return oracles::res_of(v, 2, n);
          })).epsilon(1e-6).scale(1.0));
    CHECK(*vs.reliability_bc ==
          doctest::Approx(fd_variance([&](std::span<const double> v) {
              return oracles::rel_bc_of(v, 2, n);
          })).epsilon(1e-6));
    // Y = N/2 here, so the uncertainty gradient vanishes: a documented
    // limitation of first-order propagation, asserted literally.
    CHECK(vs.uncertainty == 0.0);
    CHECK(vs.reliability == doctest::Approx(0.01460625).epsilon(1e-9));

    // n = 1: traditional variances only
    const VarianceSet lone =
        variance_estimates(summarize(ForecastSeries({0.4}, {1}), BinningScheme::equal_width(2)));
    CHECK_FALSE(lone.reliability_bc.has_value());
    CHECK_FALSE(lone.resolution_bc.has_value());
    CHECK_FALSE(lone.uncertainty_bc.has_value());
}

TEST_CASE("all variances are non-negative on random input") {
    Rng rng(47);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + rng.below(150);
        const CountSummary counts =
            summarize(random_series(rng, n), BinningScheme::equal_width(1 + rng.below(10)));
        const VarianceSet vs = variance_estimates(counts);
        CHECK(vs.reliability >= 0.0);
        CHECK(vs.resolution >= 0.0);
        CHECK(vs.uncertainty >= 0.0);
        CHECK(*vs.reliability_bc >= 0.0);
        CHECK(*vs.resolution_bc >= 0.0);
        CHECK(*vs.uncertainty_bc >= 0.0);
    }
}

TEST_CASE("uncertainty variance vanishes exactly at half climatology") {
    // Y = N/2 zeroes the only nonzero jacobian slot even though the
    // estimator itself still fluctuates.
    const CountSummary counts =
        summarize(ForecastSeries({0.3, 0.7, 0.2, 0.9}, {1, 0, 1, 0}), BinningScheme::equal_width(2));
    CHECK(counts.events_total * 2 == counts.n);
    CHECK(variance_estimates(counts).uncertainty == 0.0);
}
