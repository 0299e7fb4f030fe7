#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "briervar/decompose.hpp"
#include "briervar/forecast.hpp"
#include "briervar/variance.hpp"

namespace briervar {

inline constexpr int kSchemaVersion = 1;

/// Everything one decomposition run produces, in a serialization-friendly
/// shape. JSON round-trips losslessly (doubles are emitted with shortest
/// round-trip precision); the CSV rendering is a flat row for plotting.
struct ResultDocument {
    int schema_version = kSchemaVersion;

    // input digest
    std::int64_t n = 0;
    std::size_t bins = 0;
    std::vector<double> edges;

    // per-bin counts
    std::vector<std::int64_t> count;
    std::vector<std::int64_t> events;
    std::vector<double> prob_sum;

    BrierScore brier;
    Decomposition traditional;
    std::optional<Decomposition> bias_corrected;         // absent when n < 2
    std::optional<Decomposition> consistency_corrected;  // absent when n < 2
    VarianceSet variances;

    // diagnostics
    int clamped_variances = 0;
    std::size_t skipped_rows = 0;
};

/// Runs the full pipeline (summary, Brier score, three families, variances).
ResultDocument make_result_document(const ForecastSeries& series, const BinningScheme& scheme);

nlohmann::ordered_json to_json(const ResultDocument& doc);
ResultDocument result_from_json(const nlohmann::ordered_json& j);

/// Flat one-row CSV (header + row), 17 significant digits per number.
std::string to_csv(const ResultDocument& doc);

/// Formats a double with 17 significant digits (lossless for IEEE doubles).
std::string format_full(double value);

}  // namespace briervar
