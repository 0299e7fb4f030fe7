#pragma once

#include <optional>

#include "briervar/forecast.hpp"

namespace briervar {

enum class EstimatorFamily {
    traditional,            ///< non-negative components, uncertainty <= 1/4
    bias_corrected,         ///< smaller bias; components may leave their ranges
    consistency_corrected,  ///< bias correction shrunk back into the valid box
};

/// One (reliability, resolution, uncertainty) triple. The Brier sum
/// rel - res + unc is identical across the three families computed from the
/// same CountSummary.
struct Decomposition {
    double reliability = 0.0;
    double resolution = 0.0;
    double uncertainty = 0.0;
    EstimatorFamily family = EstimatorFamily::traditional;
    /// Shrink factor in [0,1]; present only for consistency_corrected.
    std::optional<double> gamma;

    double brier_sum() const noexcept { return reliability - resolution + uncertainty; }
};

/// Classic binned estimators. Empty bins contribute nothing.
Decomposition decompose_traditional(const CountSummary& counts);

/// Bias-corrected estimators. Bins with fewer than two cases are excluded
/// from the correction sum. Requires n >= 2 (throws std::domain_error).
/// Reliability and resolution may come out negative and uncertainty may
/// exceed 1/4; that is inherent to the correction, not an error.
Decomposition decompose_bias_corrected(const CountSummary& counts);

/// Bias correction shrunk along the plane of constant Brier sum so that the
/// result stays inside [0,1] x [0,1] x [0,1/4]. Requires n >= 2.
Decomposition consistency_correct(const CountSummary& counts);

}  // namespace briervar
