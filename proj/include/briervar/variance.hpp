#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "briervar/forecast.hpp"

namespace briervar {

/// Column sums of the stacked indicator matrix, ordered
/// [A_1..A_D | B_1..B_D | C_1..C_D | Y], length 3D+1. One shared layout
/// serves all six estimators; slots an estimator does not depend on simply
/// get zero Jacobian entries.
struct StackedVector {
    std::size_t bins = 0;
    std::vector<double> values;

    static StackedVector from_counts(const CountSummary& counts);

    std::size_t size() const noexcept { return values.size(); }
    std::size_t a_slot(std::size_t d) const noexcept { return d; }              // d in 0..D-1
    std::size_t b_slot(std::size_t d) const noexcept { return bins + d; }
    std::size_t c_slot(std::size_t d) const noexcept { return 2 * bins + d; }
    std::size_t y_slot() const noexcept { return 3 * bins; }
};

/// Dense symmetric matrix of covariances of the stacked column sums.
class CovarianceMatrix {
public:
    explicit CovarianceMatrix(std::size_t dim) : dim_(dim), data_(dim * dim, 0.0) {}

    std::size_t dim() const noexcept { return dim_; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * dim_ + j]; }
    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * dim_ + j]; }
    std::span<const double> data() const noexcept { return data_; }

private:
    std::size_t dim_;
    std::vector<double> data_;
};

/// Covariance of the stacked column sums under row-iid sampling, assembled
/// exactly from the CountSummary sufficient statistics (never from raw rows).
CovarianceMatrix covariance_of_sums(const CountSummary& counts);

/// Analytic gradients of the six estimators with respect to the stacked
/// coordinates, with N held constant. Any entry whose formula has a vanishing
/// denominator (empty bin, or a singleton bin in the bias-corrected bin
/// terms, or n < 2 for the bias-corrected Y slots) is set to zero.
struct JacobianSet {
    std::vector<double> reliability, resolution, uncertainty;
    std::vector<double> reliability_bc, resolution_bc, uncertainty_bc;
};

JacobianSet jacobians(const CountSummary& counts);

/// v * M * v^T for a row vector v.
double quadratic_form(std::span<const double> v, const CovarianceMatrix& m);

/// First-order variance estimates J Sigma J^T for the six estimators.
struct VarianceSet {
    double reliability = 0.0;
    double resolution = 0.0;
    double uncertainty = 0.0;
    /// Absent when n < 2 (the bias correction itself is undefined there).
    std::optional<double> reliability_bc, resolution_bc, uncertainty_bc;
    /// Number of variances that came out negative from round-off and were
    /// clamped to zero.
    int clamped = 0;
};

VarianceSet variance_estimates(const CountSummary& counts);

}  // namespace briervar
