#include "greenshop/generator.hpp"

#include "greenshop/errors.hpp"

#include <array>
#include <cmath>
#include <limits>

namespace greenshop {

std::string to_string(FleetKind kind) {
    return kind == FleetKind::Homogeneous ? "homogeneous" : "heterogeneous";
}

FleetKind parse_fleet_kind(const std::string &text) {
    if (text == "homogeneous") return FleetKind::Homogeneous;
    if (text == "heterogeneous") return FleetKind::Heterogeneous;
    throw ConfigError("unknown fleet kind '" + text + "' (expected homogeneous|heterogeneous)");
}

std::string to_string(DagTemplate t) {
    switch (t) {
    case DagTemplate::Chain: return "chain";
    case DagTemplate::TwoBranch: return "two-branch";
    case DagTemplate::FanOut: return "fan-out";
    }
    return "unknown";
}

void GeneratorConfig::validate() const {
    if (n_jobs < 1 || k_tasks < 1 || n_machines < 1) {
        throw ConfigError("generator counts n_jobs, k_tasks and n_machines must all be >= 1");
    }
    if (duration_mean_epochs <= Rational(0)) {
        throw ConfigError("duration_mean_epochs must be positive");
    }
    if (arrival_window_epochs < 1) {
        throw ConfigError("arrival_window_epochs must be >= 1");
    }
}

std::vector<Machine> make_fleet(FleetKind kind, int n_machines) {
    struct ServerClass {
        Rational power_kw;
        Rational speed;
    };
    static const std::array<ServerClass, 5> classes{{
        {Rational(1, 4), Rational(1, 3)},
        {Rational(1, 2), Rational(1, 2)},
        {Rational(1), Rational(1)},
        {Rational(3, 2), Rational(4, 3)},
        {Rational(2), Rational(2)},
    }};
    if (n_machines < 1) {
        throw ConfigError("fleet needs at least one machine, got " + std::to_string(n_machines));
    }
    std::vector<Machine> fleet;
    fleet.reserve(static_cast<std::size_t>(n_machines));
    for (int i = 0; i < n_machines; ++i) {
        if (kind == FleetKind::Homogeneous) {
            fleet.push_back({i, Rational(1), Rational(1)});
        } else {
            const auto &c = classes[static_cast<std::size_t>(i) % classes.size()];
            fleet.push_back({i, c.power_kw, c.speed});
        }
    }
    return fleet;
}

std::vector<Edge> instantiate_template(DagTemplate t, int k) {
    if (k < 1) {
        throw TemplateError("template needs at least one task");
    }
    std::vector<Edge> edges;
    switch (t) {
    case DagTemplate::Chain:
        for (int i = 0; i + 1 < k; ++i) edges.emplace_back(i, i + 1);
        break;
    case DagTemplate::FanOut:
        for (int i = 1; i < k; ++i) edges.emplace_back(0, i);
        break;
    case DagTemplate::TwoBranch: {
        if (k < 3) {
            throw TemplateError("two-branch template needs k >= 3, got " + std::to_string(k));
        }
        const int longer = k / 2; // ceil((k - 1) / 2)
        int prev = 0;
        for (int i = 1; i <= longer; ++i) {
            edges.emplace_back(prev, i);
            prev = i;
        }
        prev = 0;
        for (int i = longer + 1; i < k; ++i) {
            edges.emplace_back(prev, i);
            prev = i;
        }
        break;
    }
    }
    return edges;
}

std::uint64_t Sampler::uniform_below(std::uint64_t n) {
    if (n == 0) {
        throw ParameterError("uniform_below(0)");
    }
    const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t limit = max - (max % n + 1) % n;
    std::uint64_t x = 0;
    do {
        x = engine_();
    } while (x > limit);
    return x % n;
}

double Sampler::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Sampler::exponential(double mean) {
    return -mean * std::log1p(-uniform01());
}

Epoch discretize_duration(double x) {
    return std::max<Epoch>(1, static_cast<Epoch>(std::ceil(x)));
}

Epoch sample_duration(Sampler &rng, const Rational &mean) {
    if (mean <= Rational(0)) {
        throw ParameterError("duration mean must be positive");
    }
    return discretize_duration(rng.exponential(mean.to_double()));
}

Instance generate(const GeneratorConfig &config) {
    config.validate();
    Sampler rng(config.seed);
    Instance inst;
    inst.machines = make_fleet(config.fleet_kind, config.n_machines);
    std::vector<int> all_machines;
    for (const auto &m : inst.machines) all_machines.push_back(m.id);

    static constexpr std::array<DagTemplate, 3> templates{DagTemplate::Chain, DagTemplate::TwoBranch,
                                                          DagTemplate::FanOut};
    for (int j = 0; j < config.n_jobs; ++j) {
        Job job;
        job.id = j;
        DagTemplate t = templates[rng.uniform_below(templates.size())];
        // Below three tasks the two-branch shape does not exist; it degenerates to a chain.
        if (t == DagTemplate::TwoBranch && config.k_tasks < 3) t = DagTemplate::Chain;
        job.arrival = static_cast<Epoch>(rng.uniform_below(static_cast<std::uint64_t>(config.arrival_window_epochs)));
        for (int i = 0; i < config.k_tasks; ++i) {
            job.tasks.push_back({j, i, sample_duration(rng, config.duration_mean_epochs), all_machines});
        }
        job.edges = instantiate_template(t, config.k_tasks);
        inst.jobs.push_back(std::move(job));
    }
    inst.horizon = default_horizon(inst);
    return inst;
}

} // namespace greenshop
