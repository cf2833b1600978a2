#pragma once

#include "greenshop/generator.hpp"
#include "greenshop/model.hpp"
#include "greenshop/traces.hpp"

#include <vector>

namespace greenshop::test {

inline Machine machine(int id, Rational kw = Rational(1), Rational speed = Rational(1)) { return {id, kw, speed}; }

/// Job whose tasks may run on every machine in `machine_ids`.
inline Job job(int id, Epoch arrival, const std::vector<Epoch> &durations, std::vector<Edge> edges,
               const std::vector<int> &machine_ids) {
    Job j{id, arrival, {}, std::move(edges)};
    for (std::size_t i = 0; i < durations.size(); ++i) {
        j.tasks.push_back({id, static_cast<int>(i), durations[i], machine_ids});
    }
    return j;
}

inline std::vector<Edge> chain_edges(int k) {
    std::vector<Edge> e;
    for (int i = 0; i + 1 < k; ++i) e.emplace_back(i, i + 1);
    return e;
}

inline Instance instance(std::vector<Job> jobs, std::vector<Machine> machines, Epoch horizon = 0) {
    Instance inst{std::move(jobs), std::move(machines), 1};
    inst.horizon = horizon > 0 ? horizon : default_horizon(inst);
    return inst;
}

inline CarbonTrace trace_g(const std::vector<std::int64_t> &grams) {
    std::vector<std::int64_t> mg;
    for (auto g : grams) mg.push_back(g * 1000);
    return {mg, "test"};
}

/// Tiny random instance inside the oracle's reach: at most 2 jobs, 3 tasks
/// per job, 2 machines and a 12-epoch horizon.
inline Instance tiny_instance(std::uint64_t seed) {
    Sampler rng(seed);
    const int n_jobs = 1 + static_cast<int>(rng.uniform_below(2));
    const int n_machines = 1 + static_cast<int>(rng.uniform_below(2));
    std::vector<Machine> machines;
    const bool hetero = rng.uniform_below(2) == 1;
    for (int m = 0; m < n_machines; ++m) {
        machines.push_back(hetero && m == 1 ? Machine{m, Rational(2), Rational(2)} : Machine{m, Rational(1), Rational(1)});
    }
    std::vector<Job> jobs;
    int total_tasks = 0;
    for (int j = 0; j < n_jobs; ++j) {
        const int k = 1 + static_cast<int>(rng.uniform_below(n_jobs == 1 ? 3 : 2));
        total_tasks += k;
        std::vector<Epoch> d;
        for (int i = 0; i < k; ++i) d.push_back(1 + static_cast<Epoch>(rng.uniform_below(2)));
        std::vector<Edge> edges;
        const auto shape = rng.uniform_below(3);
        for (int i = 1; i < k; ++i) edges.emplace_back(shape == 0 ? i - 1 : 0, i);
        std::vector<int> eligible;
        for (int m = 0; m < n_machines; ++m) eligible.push_back(m);
        if (n_machines == 2 && rng.uniform_below(4) == 0) eligible = {static_cast<int>(rng.uniform_below(2))};
        jobs.push_back(job(j, static_cast<Epoch>(rng.uniform_below(3)), d, edges, eligible));
    }
    Instance inst = instance(std::move(jobs), std::move(machines));
    const Epoch cap = total_tasks >= 4 && n_machines == 2 ? 7 : (total_tasks >= 4 ? 8 : 12);
    inst.horizon = std::min(inst.horizon, cap);
    return inst;
}

} // namespace greenshop::test
