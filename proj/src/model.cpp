#include "greenshop/model.hpp"

#include "greenshop/errors.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <set>

namespace greenshop {

std::int64_t Machine::watts() const {
    const Rational w = power_kw * Rational(1000);
    if (!w.is_integer()) {
        throw ParameterError("machine " + std::to_string(id) + ": power must be a whole number of watts");
    }
    return w.num();
}

bool Task::eligible(int machine_id) const {
    return std::find(eligible_machines.begin(), eligible_machines.end(), machine_id) != eligible_machines.end();
}

const Machine &Instance::machine(int id) const {
    for (const auto &m : machines) {
        if (m.id == id) return m;
    }
    throw ReferenceError("unknown machine id " + std::to_string(id));
}

const Job &Instance::job(int id) const {
    for (const auto &j : jobs) {
        if (j.id == id) return j;
    }
    throw ReferenceError("unknown job id " + std::to_string(id));
}

std::size_t Instance::task_count() const {
    std::size_t n = 0;
    for (const auto &j : jobs) n += j.tasks.size();
    return n;
}

std::string to_string(const TaskKey &key) {
    return "t(" + std::to_string(key.job_id) + "," + std::to_string(key.task_index) + ")";
}

Epoch scaled_duration(Epoch base_duration, const Rational &speed) {
    const Epoch p = (Rational(base_duration) / speed).ceil();
    return std::max<Epoch>(1, p);
}

Epoch processing_time(const Task &task, const Machine &machine) {
    if (!task.eligible(machine.id)) {
        throw EligibilityError(to_string(TaskKey{task.job_id, task.task_index}) + " is not eligible for machine " +
                               std::to_string(machine.id));
    }
    return scaled_duration(task.base_duration, machine.speed);
}

Epoch default_horizon(const Instance &instance) {
    Epoch max_arrival = 0;
    Epoch serial = 0;
    for (const auto &job : instance.jobs) {
        max_arrival = std::max(max_arrival, job.arrival);
        for (const auto &task : job.tasks) {
            Epoch slowest = 1;
            for (int m : task.eligible_machines) {
                slowest = std::max(slowest, processing_time(task, instance.machine(m)));
            }
            serial += slowest;
        }
    }
    return max_arrival + serial;
}

namespace {

std::vector<int> find_cycle(int n, const std::vector<Edge> &edges, const std::vector<int> &indegree) {
    // Every vertex left with positive indegree lies on or downstream of a
    // cycle; walking predecessors inside that set must revisit a vertex.
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    for (auto [u, v] : edges) {
        if (indegree[static_cast<std::size_t>(u)] > 0 && indegree[static_cast<std::size_t>(v)] > 0) {
            preds[static_cast<std::size_t>(v)].push_back(u);
        }
    }
    int start = 0;
    while (indegree[static_cast<std::size_t>(start)] == 0) ++start;
    std::vector<int> seen_at(static_cast<std::size_t>(n), -1);
    std::vector<int> walk;
    int cur = start;
    while (seen_at[static_cast<std::size_t>(cur)] < 0) {
        seen_at[static_cast<std::size_t>(cur)] = static_cast<int>(walk.size());
        walk.push_back(cur);
        auto &ps = preds[static_cast<std::size_t>(cur)];
        cur = *std::min_element(ps.begin(), ps.end());
    }
    std::vector<int> cycle(walk.begin() + seen_at[static_cast<std::size_t>(cur)], walk.end());
    std::sort(cycle.begin(), cycle.end());
    return cycle;
}

} // namespace

std::vector<int> topological_order(const Job &job) {
    const int n = static_cast<int>(job.tasks.size());
    std::vector<int> indegree(static_cast<std::size_t>(n), 0);
    std::vector<std::vector<int>> succs(static_cast<std::size_t>(n));
    for (auto [u, v] : job.edges) {
        if (u < 0 || v < 0 || u >= n || v >= n) {
            throw ReferenceError("job " + std::to_string(job.id) + ": edge (" + std::to_string(u) + "," +
                                 std::to_string(v) + ") references a missing task");
        }
        succs[static_cast<std::size_t>(u)].push_back(v);
        ++indegree[static_cast<std::size_t>(v)];
    }
    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int i = 0; i < n; ++i) {
        if (indegree[static_cast<std::size_t>(i)] == 0) ready.push(i);
    }
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    auto remaining = indegree;
    while (!ready.empty()) {
        const int u = ready.top();
        ready.pop();
        order.push_back(u);
        for (int v : succs[static_cast<std::size_t>(u)]) {
            if (--remaining[static_cast<std::size_t>(v)] == 0) ready.push(v);
        }
    }
    if (static_cast<int>(order.size()) != n) {
        auto cycle = find_cycle(n, job.edges, remaining);
        std::string names;
        for (int v : cycle) names += (names.empty() ? "" : ",") + std::to_string(v);
        throw DagError("job " + std::to_string(job.id) + ": dependency cycle through tasks {" + names + "}",
                       std::move(cycle));
    }
    return order;
}

void validate(const Instance &instance) {
    if (instance.horizon < 1) {
        throw ParameterError("horizon must be positive");
    }
    std::set<int> machine_ids;
    for (const auto &m : instance.machines) {
        if (!machine_ids.insert(m.id).second) {
            throw ParameterError("duplicate machine id " + std::to_string(m.id));
        }
        if (m.power_kw <= Rational(0) || m.speed <= Rational(0)) {
            throw ParameterError("machine " + std::to_string(m.id) + ": power and speed must be positive");
        }
        (void)m.watts();
    }
    std::set<int> job_ids;
    for (const auto &job : instance.jobs) {
        if (!job_ids.insert(job.id).second) {
            throw ParameterError("duplicate job id " + std::to_string(job.id));
        }
        if (job.arrival < 0) {
            throw ParameterError("job " + std::to_string(job.id) + ": negative arrival");
        }
        for (std::size_t i = 0; i < job.tasks.size(); ++i) {
            const Task &t = job.tasks[i];
            if (t.job_id != job.id || t.task_index != static_cast<int>(i)) {
                throw ParameterError("job " + std::to_string(job.id) + ": task " + std::to_string(i) +
                                     " carries mismatched identifiers");
            }
            if (t.base_duration < 1) {
                throw ParameterError(to_string(TaskKey{job.id, t.task_index}) + ": base duration must be >= 1");
            }
            if (t.eligible_machines.empty()) {
                throw ParameterError(to_string(TaskKey{job.id, t.task_index}) + ": no eligible machines");
            }
            for (int m : t.eligible_machines) {
                if (!machine_ids.contains(m)) {
                    throw ReferenceError(to_string(TaskKey{job.id, t.task_index}) + ": eligible machine " +
                                         std::to_string(m) + " is not in the fleet");
                }
            }
        }
        (void)topological_order(job);
    }
}

std::string to_string(ConstraintFamily family) {
    switch (family) {
    case ConstraintFamily::Arrival: return "arrival";
    case ConstraintFamily::Precedence: return "precedence";
    case ConstraintFamily::Assignment: return "assignment";
    case ConstraintFamily::Completion: return "completion";
    case ConstraintFamily::NoOverlap: return "no-overlap";
    case ConstraintFamily::Horizon: return "horizon";
    }
    return "unknown";
}

FeasibilityReport check_feasible(const Instance &instance, const Schedule &schedule) {
    for (const auto &[key, asg] : schedule.assignments) {
        const Job &job = instance.job(key.job_id);
        if (key.task_index < 0 || key.task_index >= static_cast<int>(job.tasks.size())) {
            throw ReferenceError("schedule references missing task " + to_string(key));
        }
        (void)instance.machine(asg.machine_id);
    }

    FeasibilityReport report;
    auto add = [&](ConstraintFamily f, std::vector<TaskKey> tasks, std::vector<Epoch> epochs, std::string msg) {
        report.violations.push_back({f, std::move(tasks), std::move(epochs), std::move(msg)});
    };

    struct Placed {
        TaskKey key;
        int machine;
        Epoch start;
        Epoch completion;
    };
    std::vector<Placed> placed;
    placed.reserve(schedule.assignments.size());
    std::map<TaskKey, Epoch> completion_of;

    for (const auto &job : instance.jobs) {
        for (const auto &task : job.tasks) {
            const TaskKey key{job.id, task.task_index};
            auto it = schedule.assignments.find(key);
            if (it == schedule.assignments.end()) {
                add(ConstraintFamily::Assignment, {key}, {}, to_string(key) + " is not assigned");
                continue;
            }
            const Assignment &asg = it->second;
            if (!task.eligible(asg.machine_id)) {
                add(ConstraintFamily::Assignment, {key}, {asg.start},
                    to_string(key) + " assigned to ineligible machine " + std::to_string(asg.machine_id));
                continue;
            }
            const Epoch p = scaled_duration(task.base_duration, instance.machine(asg.machine_id).speed);
            const Epoch completion = asg.start + p;
            if (asg.completion && *asg.completion != completion) {
                add(ConstraintFamily::Completion, {key}, {asg.start, *asg.completion},
                    to_string(key) + " declares completion " + std::to_string(*asg.completion) + " but start " +
                        std::to_string(asg.start) + " + processing " + std::to_string(p) + " = " +
                        std::to_string(completion));
            }
            if (asg.start < job.arrival) {
                add(ConstraintFamily::Arrival, {key}, {asg.start, job.arrival},
                    to_string(key) + " starts at " + std::to_string(asg.start) + " before arrival " +
                        std::to_string(job.arrival));
            }
            if (completion > instance.horizon) {
                add(ConstraintFamily::Horizon, {key}, {completion, instance.horizon},
                    to_string(key) + " completes at " + std::to_string(completion) + " past horizon " +
                        std::to_string(instance.horizon));
            }
            completion_of[key] = completion;
            placed.push_back({key, asg.machine_id, asg.start, completion});
        }
    }

    for (const auto &job : instance.jobs) {
        for (auto [u, v] : job.edges) {
            const TaskKey ku{job.id, u};
            const TaskKey kv{job.id, v};
            auto cu = completion_of.find(ku);
            auto sv = schedule.assignments.find(kv);
            if (cu == completion_of.end() || sv == schedule.assignments.end() || !completion_of.contains(kv)) {
                continue;
            }
            if (sv->second.start < cu->second) {
                add(ConstraintFamily::Precedence, {ku, kv}, {cu->second, sv->second.start},
                    "edge (" + std::to_string(u) + "," + std::to_string(v) + ") of job " + std::to_string(job.id) +
                        ": successor starts at " + std::to_string(sv->second.start) +
                        " before predecessor completes at " + std::to_string(cu->second));
            }
        }
    }

    std::stable_sort(placed.begin(), placed.end(), [](const Placed &a, const Placed &b) {
        return std::tie(a.machine, a.start, a.key) < std::tie(b.machine, b.start, b.key);
    });
    for (std::size_t i = 0; i < placed.size(); ++i) {
        for (std::size_t j = i + 1; j < placed.size() && placed[j].machine == placed[i].machine; ++j) {
            if (placed[j].start >= placed[i].completion) break;
            add(ConstraintFamily::NoOverlap, {placed[i].key, placed[j].key}, {placed[j].start, placed[i].completion},
                to_string(placed[i].key) + " [" + std::to_string(placed[i].start) + "," +
                    std::to_string(placed[i].completion) + ") and " + to_string(placed[j].key) + " [" +
                    std::to_string(placed[j].start) + "," + std::to_string(placed[j].completion) +
                    ") overlap on machine " + std::to_string(placed[i].machine));
        }
    }
    return report;
}

} // namespace greenshop
