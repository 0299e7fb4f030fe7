// Independent reference implementations used only by the test suites.
// Everything here deliberately avoids the library's computation paths:
// covariances come from the materialized row matrix, gradients from central
// finite differences, the Gaussian CDF from series / continued-fraction
// evaluation in long double, and the seasonal fit from exact rational
// arithmetic.
#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "briervar/forecast.hpp"
#include "briervar/variance.hpp"

namespace oracles {

/// Raw stacked rows [A_nd | B_nd | C_nd | Y_n], one per forecast instance.
std::vector<std::vector<double>> materialize_rows(const briervar::ForecastSeries& series,
                                                  const briervar::BinningScheme& scheme);

/// X^T (I - (1/N) 1 1^T) X accumulated in long double from the raw rows.
briervar::CovarianceMatrix brute_covariance(const briervar::ForecastSeries& series,
                                            const briervar::BinningScheme& scheme);

// The six estimators as smooth real functions of the stacked coordinates;
// n is held constant. Layout matches briervar::StackedVector.
double rel_of(std::span<const double> x, std::size_t bins, double n);
double res_of(std::span<const double> x, std::size_t bins, double n);
double unc_of(std::span<const double> x, std::size_t bins, double n);
double rel_bc_of(std::span<const double> x, std::size_t bins, double n);
double res_bc_of(std::span<const double> x, std::size_t bins, double n);
double unc_bc_of(std::span<const double> x, std::size_t bins, double n);

/// Central finite-difference gradient with step h on every coordinate.
std::vector<double> fd_gradient(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double h);

/// Gaussian CDF to ~1e-18, via the Maclaurin series of erf for small
/// arguments and the continued fraction of erfc in the tails.
double phi_oracle(double x);

/// Exact rational least-squares solution of the seasonal normal equations.
/// The design entries (computed in double, converted exactly) and the
/// observations are treated as exact rationals.
std::array<double, 5> exact_seasonal_ols(std::span<const std::int64_t> days,
                                         std::span<const double> temps);

}  // namespace oracles
