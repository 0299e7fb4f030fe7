#pragma once

#include <cstddef>
#include <istream>
#include <stdexcept>
#include <string>

#include "briervar/ar1.hpp"
#include "briervar/forecast.hpp"

namespace briervar {

/// Parse failure with the 1-based line number where it happened.
class CsvError : public std::runtime_error {
public:
    CsvError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Reads `p,y` forecast archives: header row required, `.` decimal separator,
/// p in [0,1] and y in {0,1} enforced per row.
ForecastSeries read_forecast_csv(std::istream& in);

/// Reads `day,temp` daily series: header row required, integer day indices.
DailySeries read_daily_csv(std::istream& in);

}  // namespace briervar
