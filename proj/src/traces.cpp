#include "greenshop/traces.hpp"

#include "greenshop/csv.hpp"
#include "greenshop/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

namespace greenshop {

CarbonTrace::CarbonTrace(std::vector<std::int64_t> mg_per_kwh, std::string label)
    : mg_(std::move(mg_per_kwh)), label_(std::move(label)) {
    if (mg_.empty()) {
        throw ParameterError("carbon trace must not be empty");
    }
    prefix_.resize(mg_.size() + 1, 0);
    for (std::size_t i = 0; i < mg_.size(); ++i) {
        if (mg_[i] < 0) {
            throw ParameterError("carbon intensity must be non-negative (epoch " + std::to_string(i) + ")");
        }
        prefix_[i + 1] = prefix_[i] + mg_[i];
    }
}

CarbonTrace CarbonTrace::from_grams(const std::vector<double> &g_per_kwh, std::string label) {
    std::vector<std::int64_t> mg;
    mg.reserve(g_per_kwh.size());
    for (double g : g_per_kwh) {
        if (!std::isfinite(g)) {
            throw ParameterError("carbon intensity must be finite");
        }
        mg.push_back(std::llround(g * 1000.0));
    }
    return CarbonTrace(std::move(mg), std::move(label));
}

std::int64_t CarbonTrace::mg_at(Epoch tau) const {
    if (tau < 0 || static_cast<std::size_t>(tau) >= mg_.size()) {
        throw TraceExhaustedError("epoch " + std::to_string(tau) + " is outside the carbon trace (length " +
                                  std::to_string(mg_.size()) + ")");
    }
    return mg_[static_cast<std::size_t>(tau)];
}

double CarbonTrace::at(Epoch tau) const {
    return static_cast<double>(mg_at(tau)) / 1000.0;
}

std::int64_t CarbonTrace::window_sum(Epoch begin, Epoch end) const {
    if (begin < 0 || end < begin || static_cast<std::size_t>(end) > mg_.size()) {
        throw TraceExhaustedError("epochs [" + std::to_string(begin) + "," + std::to_string(end) +
                                  ") are outside the carbon trace (length " + std::to_string(mg_.size()) + ")");
    }
    return prefix_[static_cast<std::size_t>(end)] - prefix_[static_cast<std::size_t>(begin)];
}

void CarbonTrace::require_covers(Epoch length) const {
    if (length > static_cast<Epoch>(mg_.size())) {
        throw TraceExhaustedError("carbon trace '" + label_ + "' has " + std::to_string(mg_.size()) +
                                  " epochs but " + std::to_string(length) + " are required");
    }
}

CarbonTrace CarbonTrace::slice(Epoch begin) const {
    if (begin < 0 || begin >= static_cast<Epoch>(mg_.size())) {
        throw TraceExhaustedError("cannot start trace '" + label_ + "' at epoch " + std::to_string(begin) + " of " +
                                  std::to_string(mg_.size()));
    }
    if (begin == 0) return *this;
    return {std::vector<std::int64_t>(mg_.begin() + begin, mg_.end()), label_ + "@" + std::to_string(begin)};
}

namespace {

std::optional<int> digits(const std::string &s, std::size_t pos, std::size_t n) {
    if (pos + n > s.size()) return std::nullopt;
    int v = 0;
    for (std::size_t i = pos; i < pos + n; ++i) {
        if (s[i] < '0' || s[i] > '9') return std::nullopt;
        v = v * 10 + (s[i] - '0');
    }
    return v;
}

std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

/// Seconds since 1970-01-01T00:00Z for YYYY-MM-DD[T| ]HH:MM[:SS[.frac]][Z|+HH:MM|-HH:MM].
std::optional<std::int64_t> parse_iso8601(const std::string &s) {
    auto year = digits(s, 0, 4);
    auto month = digits(s, 5, 2);
    auto day = digits(s, 8, 2);
    if (!year || !month || !day || s.size() < 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    if (*month < 1 || *month > 12 || *day < 1 || *day > 31) return std::nullopt;
    std::int64_t secs = days_from_civil(*year, static_cast<unsigned>(*month), static_cast<unsigned>(*day)) * 86400;
    std::size_t pos = 10;
    if (pos == s.size()) return secs;
    if (s[pos] != 'T' && s[pos] != ' ') return std::nullopt;
    auto hh = digits(s, pos + 1, 2);
    auto mm = digits(s, pos + 4, 2);
    if (!hh || !mm || s.size() < pos + 6 || s[pos + 3] != ':' || *hh > 23 || *mm > 59) return std::nullopt;
    secs += *hh * 3600 + *mm * 60;
    pos += 6;
    if (pos < s.size() && s[pos] == ':') {
        auto ss = digits(s, pos + 1, 2);
        if (!ss || *ss > 60) return std::nullopt;
        secs += *ss;
        pos += 3;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') ++pos;
        }
    }
    if (pos == s.size()) return secs;
    if (s[pos] == 'Z' && pos + 1 == s.size()) return secs;
    if (s[pos] == '+' || s[pos] == '-') {
        auto oh = digits(s, pos + 1, 2);
        std::optional<int> om;
        if (pos + 3 < s.size() && s[pos + 3] == ':') {
            om = digits(s, pos + 4, 2);
            if (pos + 6 != s.size()) return std::nullopt;
        } else {
            om = digits(s, pos + 3, 2);
            if (pos + 5 != s.size()) return std::nullopt;
        }
        if (!oh || !om) return std::nullopt;
        const std::int64_t offset = *oh * 3600 + *om * 60;
        return s[pos] == '+' ? secs - offset : secs + offset;
    }
    return std::nullopt;
}

std::vector<std::int64_t> read_hourly_rows(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("carbon CSV is empty; expected a header row");
    }
    const auto header = split_csv_line(line);
    std::optional<std::size_t> ts_col;
    std::optional<std::size_t> ci_col;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "timestamp") ts_col = i;
        if (header[i] == "carbon_intensity") ci_col = i;
    }
    if (!ts_col || !ci_col) {
        throw ParseError("carbon CSV header must contain 'timestamp' and 'carbon_intensity' columns");
    }
    std::vector<std::int64_t> values;
    std::optional<std::int64_t> last_ts;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++row;
        const auto fields = split_csv_line(line);
        const std::string where = "row " + std::to_string(row);
        if (fields.size() <= std::max(*ts_col, *ci_col)) {
            throw ParseError(where + ": missing columns", row);
        }
        const auto ts = parse_iso8601(fields[*ts_col]);
        if (!ts) {
            throw ParseError(where + ": timestamp '" + fields[*ts_col] + "' is not ISO-8601", row);
        }
        if (last_ts && *ts <= *last_ts) {
            throw ParseError(where + ": timestamps are not strictly increasing", row);
        }
        last_ts = ts;
        const std::string &text = fields[*ci_col];
        double value = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
            throw ParseError(where + ": carbon_intensity '" + text + "' is not numeric", row);
        }
        if (value < 0) {
            throw ParseError(where + ": carbon_intensity " + text + " is negative", row);
        }
        values.push_back(std::llround(value * 1000.0));
    }
    return values;
}

} // namespace

CarbonTrace load_hourly_csv(std::istream &in, std::size_t start_row_offset, std::string label) {
    const auto hourly = read_hourly_rows(in);
    if (hourly.empty()) {
        throw ParseError("carbon CSV has a header but no data rows");
    }
    if (start_row_offset >= hourly.size()) {
        throw ParameterError("trace offset " + std::to_string(start_row_offset) + " is past the last of " +
                             std::to_string(hourly.size()) + " data rows");
    }
    std::vector<std::int64_t> epochs;
    epochs.reserve((hourly.size() - start_row_offset) * kEpochsPerHour);
    for (std::size_t r = start_row_offset; r < hourly.size(); ++r) {
        for (int q = 0; q < kEpochsPerHour; ++q) epochs.push_back(hourly[r]);
    }
    return CarbonTrace(std::move(epochs), std::move(label));
}

CarbonTrace load_hourly_csv(const std::filesystem::path &path, std::size_t start_row_offset) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open carbon CSV " + path.string());
    }
    return load_hourly_csv(in, start_row_offset, path.filename().string() + "@" + std::to_string(start_row_offset));
}

std::size_t count_hourly_rows(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open carbon CSV " + path.string());
    }
    return read_hourly_rows(in).size();
}

CarbonTrace synthetic_sinusoid(double mean, double amplitude, std::int64_t period_epochs, std::int64_t phase_epochs,
                               std::int64_t length) {
    if (amplitude < 0 || amplitude > mean) {
        throw ParameterError("synthetic trace requires mean >= amplitude >= 0");
    }
    if (period_epochs < 1 || length < 1) {
        throw ParameterError("synthetic trace requires period >= 1 and length >= 1");
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(length));
    for (std::int64_t tau = 0; tau < length; ++tau) {
        const double angle = 2.0 * std::numbers::pi * static_cast<double>(tau + phase_epochs) /
                             static_cast<double>(period_epochs);
        values.push_back(std::max(0.0, mean + amplitude * std::sin(angle)));
    }
    std::ostringstream label;
    label << "sin(mean=" << mean << ",amp=" << amplitude << ",period=" << period_epochs << ",phase=" << phase_epochs
          << ")";
    return CarbonTrace::from_grams(values, label.str());
}

} // namespace greenshop
