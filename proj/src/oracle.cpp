#include "greenshop/oracle.hpp"

#include "greenshop/errors.hpp"

#include <algorithm>
#include <limits>

namespace greenshop::oracle {

namespace {

struct Slot {
    TaskKey key;
    std::vector<std::pair<int, Epoch>> choices;
};

std::vector<Slot> domains(const Instance &instance) {
    std::vector<const Job *> jobs;
    for (const auto &j : instance.jobs) jobs.push_back(&j);
    std::sort(jobs.begin(), jobs.end(), [](const Job *a, const Job *b) { return a->id < b->id; });
    std::vector<Slot> slots;
    for (const Job *job : jobs) {
        for (const auto &task : job->tasks) {
            Slot slot{{job->id, task.task_index}, {}};
            for (int m : task.eligible_machines) {
                const Epoch p = processing_time(task, instance.machine(m));
                for (Epoch s = 0; s + p <= instance.horizon; ++s) slot.choices.emplace_back(m, s);
            }
            slots.push_back(std::move(slot));
        }
    }
    return slots;
}

} // namespace

std::uint64_t leaf_count(const Instance &instance) {
    std::uint64_t leaves = 1;
    for (const auto &slot : domains(instance)) {
        const auto c = static_cast<std::uint64_t>(slot.choices.size());
        if (c == 0) return 0;
        if (leaves > std::numeric_limits<std::uint64_t>::max() / c) return std::numeric_limits<std::uint64_t>::max();
        leaves *= c;
    }
    return leaves;
}

std::vector<Entry> enumerate(const Instance &instance, const CarbonTrace &trace, std::optional<Epoch> makespan_bound,
                             std::uint64_t leaf_cap) {
    validate(instance);
    const std::uint64_t leaves = leaf_count(instance);
    if (leaves > leaf_cap) {
        throw OracleScaleError("oracle would visit " + std::to_string(leaves) + " leaves, cap is " +
                               std::to_string(leaf_cap));
    }
    trace.require_covers(instance.horizon);
    const auto slots = domains(instance);
    std::vector<Entry> out;
    if (leaves == 0 || slots.empty()) return out;

    std::vector<std::size_t> digit(slots.size(), 0);
    Schedule candidate;
    for (const auto &slot : slots) candidate.assignments[slot.key] = {};
    while (true) {
        for (std::size_t i = 0; i < slots.size(); ++i) {
            auto [m, s] = slots[i].choices[digit[i]];
            candidate.assignments[slots[i].key] = {m, s, std::nullopt};
        }
        if (check_feasible(instance, candidate).ok()) {
            ObjectiveReport report = evaluate(instance, candidate, &trace);
            if (!makespan_bound || report.makespan <= *makespan_bound) {
                out.push_back({candidate, report});
            }
        }
        // Odometer increment; the last task varies fastest.
        std::size_t i = slots.size();
        while (i > 0) {
            --i;
            if (++digit[i] < slots[i].choices.size()) break;
            digit[i] = 0;
            if (i == 0) return out;
        }
    }
}

const Entry &best(const std::vector<Entry> &enumeration, ObjectiveKind objective) {
    if (enumeration.empty()) {
        throw InfeasibleError("oracle enumeration is empty");
    }
    const Entry *winner = &enumeration.front();
    ObjectiveTuple winner_value = objective_tuple(objective, winner->report);
    for (const auto &e : enumeration) {
        const ObjectiveTuple v = objective_tuple(objective, e.report);
        if (v < winner_value) {
            winner = &e;
            winner_value = v;
        }
    }
    return *winner;
}

std::vector<Entry> within(const std::vector<Entry> &enumeration, Epoch bound) {
    std::vector<Entry> out;
    for (const auto &e : enumeration) {
        if (e.report.makespan <= bound) out.push_back(e);
    }
    return out;
}

} // namespace greenshop::oracle
