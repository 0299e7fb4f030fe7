#include "briervar/csv.hpp"

#include <charconv>
#include <string_view>

namespace briervar {
namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

bool split2(std::string_view line, std::string_view& first, std::string_view& second) {
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos) return false;
    if (line.find(',', comma + 1) != std::string_view::npos) return false;
    first = trim(line.substr(0, comma));
    second = trim(line.substr(comma + 1));
    return true;
}

double parse_double(std::string_view field, std::size_t line, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw CsvError(line, std::string("cannot parse ") + what + " '" + std::string(field) + "'");
    return value;
}

std::int64_t parse_int(std::string_view field, std::size_t line, const char* what) {
    std::int64_t value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw CsvError(line, std::string("cannot parse ") + what + " '" + std::string(field) + "'");
    return value;
}

void expect_header(std::istream& in, std::string_view a, std::string_view b) {
    std::string line;
    if (!std::getline(in, line)) throw CsvError(1, "missing header row");
    std::string_view first, second;
    if (!split2(line, first, second) || first != a || second != b)
        throw CsvError(1, "expected header '" + std::string(a) + "," + std::string(b) + "'");
}

}  // namespace

ForecastSeries read_forecast_csv(std::istream& in) {
    expect_header(in, "p", "y");
    std::vector<double> probs;
    std::vector<int> outcomes;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string_view p_field, y_field;
        if (!split2(line, p_field, y_field))
            throw CsvError(line_no, "expected exactly two comma-separated fields");
        const double p = parse_double(p_field, line_no, "probability");
        if (!(p >= 0.0 && p <= 1.0))
            throw CsvError(line_no, "probability " + std::string(p_field) + " outside [0,1]");
        const std::int64_t y = parse_int(y_field, line_no, "outcome");
        if (y != 0 && y != 1)
            throw CsvError(line_no, "outcome " + std::string(y_field) + " not in {0,1}");
        probs.push_back(p);
        outcomes.push_back(static_cast<int>(y));
    }
    if (probs.empty()) throw CsvError(line_no, "no data rows");
    return ForecastSeries(std::move(probs), std::move(outcomes));
}

DailySeries read_daily_csv(std::istream& in) {
    expect_header(in, "day", "temp");
    std::vector<std::int64_t> days;
    std::vector<double> temps;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::string_view day_field, temp_field;
        if (!split2(line, day_field, temp_field))
            throw CsvError(line_no, "expected exactly two comma-separated fields");
        const std::int64_t day = parse_int(day_field, line_no, "day index");
        if (!days.empty() && day <= days.back())
            throw CsvError(line_no, "day index not strictly increasing");
        days.push_back(day);
        temps.push_back(parse_double(temp_field, line_no, "temperature"));
    }
    if (days.empty()) throw CsvError(line_no, "no data rows");
    return DailySeries(std::move(days), std::move(temps));
}

}  // namespace briervar
