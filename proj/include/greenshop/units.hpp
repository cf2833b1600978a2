#pragma once

#include <compare>
#include <cstdint>

namespace greenshop {

/// Scheduling time unit. Starts, durations and horizons are whole epochs.
using Epoch = std::int64_t;

/// Wall-clock length of one epoch in hours (15 minutes).
inline constexpr double kEpochHours = 0.25;

/// Hourly data rows expand to this many epochs.
inline constexpr int kEpochsPerHour = 4;

/// Exact energy in watt-epochs. Machine power is held in whole watts, so sums
/// over a schedule are integral and compare without rounding.
struct Energy {
    std::int64_t watt_epochs = 0;

    [[nodiscard]] double kwh() const { return static_cast<double>(watt_epochs) * kEpochHours / 1000.0; }

    friend Energy operator+(Energy a, Energy b) { return {a.watt_epochs + b.watt_epochs}; }
    Energy &operator+=(Energy o) {
        watt_epochs += o.watt_epochs;
        return *this;
    }
    friend auto operator<=>(const Energy &, const Energy &) = default;
};

/// Exact emissions in watt-epoch x milligram-per-kWh. Intensities are held in
/// mg/kWh, so this is W * epochs * mg/kWh and converts to grams by
/// kEpochHours / 1e6.
struct Carbon {
    std::int64_t scaled = 0;

    [[nodiscard]] double grams() const { return static_cast<double>(scaled) * kEpochHours / 1.0e6; }

    friend Carbon operator+(Carbon a, Carbon b) { return {a.scaled + b.scaled}; }
    Carbon &operator+=(Carbon o) {
        scaled += o.scaled;
        return *this;
    }
    friend auto operator<=>(const Carbon &, const Carbon &) = default;
};

} // namespace greenshop
