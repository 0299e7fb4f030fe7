#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "briervar/forecast.hpp"
#include "briervar/rng.hpp"

using namespace briervar;

TEST_CASE("series construction validates inputs") {
    CHECK_THROWS_AS(ForecastSeries({}, {}), std::invalid_argument);
    CHECK_THROWS_AS(ForecastSeries({0.5}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(ForecastSeries({1.2}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(ForecastSeries({-0.1}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(ForecastSeries({std::nan("")}, {0}), std::invalid_argument);
    CHECK_THROWS_AS(ForecastSeries({0.5}, {2}), std::invalid_argument);
    CHECK_NOTHROW(ForecastSeries({0.0, 1.0}, {0, 1}));
}

TEST_CASE("binning scheme validates edges") {
    CHECK_THROWS_AS(BinningScheme({0.0}), std::invalid_argument);
    CHECK_THROWS_AS(BinningScheme({0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(BinningScheme({0.1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(BinningScheme({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
    CHECK_NOTHROW(BinningScheme({0.0, 1.0}));
    CHECK(BinningScheme::equal_width(4).bins() == 4);
}

TEST_CASE("bin_index follows the closed-first half-open-left rule") {
    const BinningScheme thirds = BinningScheme::equal_width(3);
    CHECK(thirds.bin_index(0.0) == 1);
    CHECK(thirds.bin_index(1.0 / 3.0) == 1);  // interior edge goes to the lower bin
    CHECK(thirds.bin_index(std::nextafter(1.0 / 3.0, 1.0)) == 2);
    CHECK(thirds.bin_index(1.0) == 3);
    CHECK_THROWS_AS(thirds.bin_index(-0.001), std::domain_error);
    CHECK_THROWS_AS(thirds.bin_index(1.001), std::domain_error);
}

TEST_CASE("every probability lands in exactly one bin") {
    for (std::size_t bins : {1u, 2u, 3u, 7u, 10u}) {
        const BinningScheme scheme = BinningScheme::equal_width(bins);
        const auto edges = scheme.edges();
        auto check_point = [&](double p) {
            const std::size_t d = scheme.bin_index(p);
            REQUIRE(d >= 1);
            REQUIRE(d <= bins);
            // consistent with the bracket convention
            CHECK(p <= edges[d]);
            if (d > 1) CHECK(p > edges[d - 1]);
        };
        for (int k = 0; k <= 1000; ++k) check_point(k / 1000.0);
        for (double e : edges) check_point(e);
    }
}

TEST_CASE("summarize matches hand arithmetic on the three-row series") {
    const ForecastSeries series({0.2, 0.8, 0.8}, {0, 1, 0});
    const CountSummary counts = summarize(series, BinningScheme::equal_width(2));
    CHECK(counts.count == std::vector<std::int64_t>{1, 2});
    CHECK(counts.events == std::vector<std::int64_t>{0, 1});
    CHECK(counts.prob_sum[0] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(counts.prob_sum[1] == doctest::Approx(1.6).epsilon(1e-15));
    CHECK(counts.prob_sq_sum[0] == doctest::Approx(0.04).epsilon(1e-15));
    CHECK(counts.prob_sq_sum[1] == doctest::Approx(1.28).epsilon(1e-15));
    CHECK(counts.prob_event_sum[0] == 0.0);
    CHECK(counts.prob_event_sum[1] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(counts.events_total == 1);
    CHECK(counts.n == 3);
}

TEST_CASE("summarize single row and single bin") {
    const CountSummary one = summarize(ForecastSeries({0.5}, {0}), BinningScheme::equal_width(2));
    CHECK(one.count == std::vector<std::int64_t>{1, 0});  // 0.5 goes to the closed first bin
    CHECK(one.events == std::vector<std::int64_t>{0, 0});
    CHECK(one.prob_sum[0] == 0.5);
    CHECK(one.events_total == 0);
    CHECK(one.n == 1);

    const ForecastSeries series({0.1, 0.6, 0.9}, {1, 0, 1});
    const CountSummary all = summarize(series, BinningScheme::equal_width(1));
    CHECK(all.count[0] == 3);
    CHECK(all.events[0] == 2);
    CHECK(all.prob_sum[0] == doctest::Approx(1.6).epsilon(1e-15));
}

TEST_CASE("summarize is permutation invariant and mergeable") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.below(60);
        std::vector<double> p(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform();
            y[i] = rng.bernoulli(0.4) ? 1 : 0;
        }
        const BinningScheme scheme = BinningScheme::equal_width(1 + rng.below(8));

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0u);
        for (std::size_t i = n; i-- > 1;) std::swap(order[i], order[rng.below(i + 1)]);
        std::vector<double> p2(n);
        std::vector<int> y2(n);
        for (std::size_t i = 0; i < n; ++i) {
            p2[i] = p[order[i]];
            y2[i] = y[order[i]];
        }

        const CountSummary a = summarize(ForecastSeries(p, y), scheme);
        const CountSummary b = summarize(ForecastSeries(p2, y2), scheme);
        CHECK(a.count == b.count);
        CHECK(a.events == b.events);
        for (std::size_t d = 0; d < a.bins(); ++d) {
            CHECK(a.prob_sum[d] == doctest::Approx(b.prob_sum[d]).epsilon(1e-13));
            CHECK(a.prob_sq_sum[d] == doctest::Approx(b.prob_sq_sum[d]).epsilon(1e-13));
        }

        // merging two summaries equals summarizing the concatenation
        const std::size_t cut = 1 + rng.below(static_cast<std::uint32_t>(n - 1));
        const ForecastSeries head(std::vector<double>(p.begin(), p.begin() + cut),
                                  std::vector<int>(y.begin(), y.begin() + cut));
        const ForecastSeries tail(std::vector<double>(p.begin() + cut, p.end()),
                                  std::vector<int>(y.begin() + cut, y.end()));
        const CountSummary merged = merge(summarize(head, scheme), summarize(tail, scheme));
        CHECK(merged.count == a.count);
        CHECK(merged.events == a.events);
        CHECK(merged.events_total == a.events_total);
        CHECK(merged.n == a.n);
        for (std::size_t d = 0; d < a.bins(); ++d)
            CHECK(merged.prob_sum[d] == doctest::Approx(a.prob_sum[d]).epsilon(1e-12));
    }
}

TEST_CASE("merge rejects different schemes") {
    const ForecastSeries series({0.5}, {1});
    const CountSummary a = summarize(series, BinningScheme::equal_width(2));
    const CountSummary b = summarize(series, BinningScheme::equal_width(3));
    CHECK_THROWS_AS(merge(a, b), std::invalid_argument);
}

TEST_CASE("summary invariants hold on random input") {
    Rng rng(17);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.below(200);
        std::vector<double> p(n);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform();
            y[i] = rng.bernoulli(0.3) ? 1 : 0;
        }
        const CountSummary s =
            summarize(ForecastSeries(p, y), BinningScheme::equal_width(1 + rng.below(10)));
        std::int64_t count_total = 0, event_total = 0;
        for (std::size_t d = 0; d < s.bins(); ++d) {
            CHECK(s.events[d] >= 0);
            CHECK(s.events[d] <= s.count[d]);
            CHECK(s.prob_sum[d] >= 0.0);
            CHECK(s.prob_sum[d] <= static_cast<double>(s.count[d]) + 1e-12);
            CHECK(s.prob_sq_sum[d] <= s.prob_sum[d] + 1e-12);  // p^2 <= p on [0,1]
            CHECK(s.prob_event_sum[d] <=
                  std::min(s.prob_sum[d], static_cast<double>(s.events[d])) + 1e-12);
            count_total += s.count[d];
            event_total += s.events[d];
        }
        CHECK(count_total == s.n);
        CHECK(event_total == s.events_total);
    }
}

TEST_CASE("empirical brier score on known examples") {
    const BrierScore perfect = empirical_brier(ForecastSeries({1.0, 0.0}, {1, 0}));
    CHECK(perfect.score == 0.0);

    const BrierScore half = empirical_brier(ForecastSeries({0.5, 0.5, 0.5}, {1, 0, 1}));
    CHECK(half.score == doctest::Approx(0.25).epsilon(1e-15));

    const BrierScore mixed = empirical_brier(ForecastSeries({0.2, 0.8, 0.8}, {0, 1, 0}));
    CHECK(mixed.score == doctest::Approx(0.24).epsilon(1e-14));
    REQUIRE(mixed.standard_error.has_value());
    CHECK(*mixed.standard_error == doctest::Approx(0.2).epsilon(1e-12));

    const BrierScore single = empirical_brier(ForecastSeries({0.7}, {1}));
    CHECK_FALSE(single.standard_error.has_value());
}

TEST_CASE("brier score is bounded and zero only for perfect forecasts") {
    Rng rng(23);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 1 + rng.below(100);
        std::vector<double> p(n);
        std::vector<int> y(n);
        bool perfect = true;
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = rng.uniform();
            y[i] = rng.bernoulli(0.5) ? 1 : 0;
            perfect = perfect && p[i] == static_cast<double>(y[i]);
        }
        const BrierScore s = empirical_brier(ForecastSeries(p, y));
        CHECK(s.score >= 0.0);
        CHECK(s.score <= 1.0);
        CHECK((s.score == 0.0) == perfect);
    }
}
