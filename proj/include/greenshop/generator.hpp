#pragma once

#include "greenshop/model.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace greenshop {

enum class FleetKind { Homogeneous, Heterogeneous };

std::string to_string(FleetKind kind);
FleetKind parse_fleet_kind(const std::string &text);

enum class DagTemplate { Chain, TwoBranch, FanOut };

std::string to_string(DagTemplate t);

struct GeneratorConfig {
    int n_jobs = 10;
    int k_tasks = 4;
    int n_machines = 5;
    FleetKind fleet_kind = FleetKind::Homogeneous;
    Rational duration_mean_epochs{7};
    Epoch arrival_window_epochs = 96;
    std::uint64_t seed = 0;

    /// Throws ConfigError on non-positive counts or mean.
    void validate() const;

    friend bool operator==(const GeneratorConfig &, const GeneratorConfig &) = default;
};

/// Homogeneous: n machines at 1 kW, speed 1. Heterogeneous: machine i takes
/// class i mod 5 of {0.25 kW @ 1/3, 0.5 @ 1/2, 1 @ 1, 1.5 @ 4/3, 2 @ 2}.
std::vector<Machine> make_fleet(FleetKind kind, int n_machines);

/// Edge set of a template on k tasks. TwoBranch splits the k-1 non-root tasks
/// into chains of ceil((k-1)/2) and floor((k-1)/2); the longer chain takes the
/// lower indices.
std::vector<Edge> instantiate_template(DagTemplate t, int k);

/// Portable sampler: every draw is derived from raw mt19937_64 output with
/// documented arithmetic, so results do not depend on the standard library's
/// distribution implementations.
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : engine_(seed) {}

    /// Uniform integer in [0, n) by rejection on the raw 64-bit output.
    std::uint64_t uniform_below(std::uint64_t n);

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform01();

    /// Inverse-CDF exponential draw: -mean * log1p(-u).
    double exponential(double mean);

private:
    std::mt19937_64 engine_;
};

/// max(1, ceil(x)) for a continuous duration draw.
Epoch discretize_duration(double x);

Epoch sample_duration(Sampler &rng, const Rational &mean);

/// Draw order per job, in job index order: template, arrival, then one
/// duration per task in task order. Horizon follows `default_horizon`.
Instance generate(const GeneratorConfig &config);

} // namespace greenshop
