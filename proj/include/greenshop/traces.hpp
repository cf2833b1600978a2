#pragma once

#include "greenshop/units.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace greenshop {

/// Grid carbon intensity, one value per epoch.
///
/// Values are stored exactly in milligrams CO2 per kWh so that carbon sums
/// are integral; `at()` returns gCO2/kWh.
class CarbonTrace {
public:
    CarbonTrace(std::vector<std::int64_t> mg_per_kwh, std::string label);

    /// Rounds each gCO2/kWh value to the nearest milligram.
    static CarbonTrace from_grams(const std::vector<double> &g_per_kwh, std::string label);

    [[nodiscard]] std::size_t size() const { return mg_.size(); }
    [[nodiscard]] const std::string &label() const { return label_; }
    [[nodiscard]] const std::vector<std::int64_t> &mg_per_kwh() const { return mg_; }

    /// gCO2/kWh at epoch `tau`; throws TraceExhaustedError past the end.
    [[nodiscard]] double at(Epoch tau) const;
    [[nodiscard]] std::int64_t mg_at(Epoch tau) const;

    /// Sum of mg/kWh over [begin, end); throws TraceExhaustedError if end > size().
    [[nodiscard]] std::int64_t window_sum(Epoch begin, Epoch end) const;

    /// Throws TraceExhaustedError unless the trace covers [0, length).
    void require_covers(Epoch length) const;

    /// Suffix starting at epoch `begin`, labelled `<label>@<begin>`.
    [[nodiscard]] CarbonTrace slice(Epoch begin) const;

    friend bool operator==(const CarbonTrace &, const CarbonTrace &) = default;

private:
    std::vector<std::int64_t> mg_;
    std::vector<std::int64_t> prefix_;
    std::string label_;
};

/// Reads an hourly CSV with `timestamp` and `carbon_intensity` columns and
/// replicates each row into four epochs, starting at data row `start_row_offset`.
CarbonTrace load_hourly_csv(std::istream &in, std::size_t start_row_offset, std::string label = "csv");
CarbonTrace load_hourly_csv(const std::filesystem::path &path, std::size_t start_row_offset);

/// Number of data rows in an hourly CSV (validates the whole file).
std::size_t count_hourly_rows(const std::filesystem::path &path);

/// mean + amplitude * sin(2 pi (tau + phase) / period), clamped at zero.
CarbonTrace synthetic_sinusoid(double mean, double amplitude, std::int64_t period_epochs, std::int64_t phase_epochs,
                               std::int64_t length);

} // namespace greenshop
