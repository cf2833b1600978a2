#include "greenshop/objectives.hpp"

#include "greenshop/errors.hpp"

#include <algorithm>

namespace greenshop {

namespace {

template <typename Fn>
void for_each_placement(const Instance &instance, const Schedule &schedule, Fn &&fn) {
    for (const auto &[key, asg] : schedule.assignments) {
        const Task &task = instance.job(key.job_id).tasks.at(static_cast<std::size_t>(key.task_index));
        const Machine &m = instance.machine(asg.machine_id);
        fn(m, asg.start, scaled_duration(task.base_duration, m.speed));
    }
}

} // namespace

Epoch makespan(const Instance &instance, const Schedule &schedule) {
    Epoch result = 0;
    for_each_placement(instance, schedule,
                       [&](const Machine &, Epoch start, Epoch p) { result = std::max(result, start + p); });
    return result;
}

Energy energy(const Instance &instance, const Schedule &schedule) {
    Energy total;
    for_each_placement(instance, schedule,
                       [&](const Machine &m, Epoch, Epoch p) { total += Energy{m.watts() * p}; });
    return total;
}

Carbon carbon(const Instance &instance, const Schedule &schedule, const CarbonTrace &trace) {
    Carbon total;
    for_each_placement(instance, schedule, [&](const Machine &m, Epoch start, Epoch p) {
        total += Carbon{m.watts() * trace.window_sum(start, start + p)};
    });
    return total;
}

double utilization(const Instance &instance, const Schedule &schedule) {
    const Epoch span = makespan(instance, schedule);
    if (span <= 0 || instance.machines.empty()) {
        throw UndefinedError("utilization is undefined for a zero makespan");
    }
    Epoch busy = 0;
    for_each_placement(instance, schedule, [&](const Machine &, Epoch, Epoch p) { busy += p; });
    return static_cast<double>(busy) / (static_cast<double>(instance.machines.size()) * static_cast<double>(span));
}

ObjectiveReport evaluate(const Instance &instance, const Schedule &schedule, const CarbonTrace *trace) {
    ObjectiveReport r;
    r.makespan = makespan(instance, schedule);
    r.energy = energy(instance, schedule);
    if (trace != nullptr) r.carbon = carbon(instance, schedule, *trace);
    r.utilization = r.makespan > 0 ? utilization(instance, schedule) : 0.0;
    return r;
}

double savings(double baseline_value, double candidate_value) {
    if (!(baseline_value > 0)) {
        throw UndefinedError("savings are undefined for a non-positive baseline");
    }
    return 100.0 * (1.0 - candidate_value / baseline_value);
}

double savings(Carbon baseline, Carbon candidate) {
    if (baseline.scaled <= 0) {
        throw UndefinedError("carbon savings are undefined for a zero baseline");
    }
    if (candidate == baseline) return 0.0;
    return 100.0 * static_cast<double>(baseline.scaled - candidate.scaled) / static_cast<double>(baseline.scaled);
}

double savings(Energy baseline, Energy candidate) {
    if (baseline.watt_epochs <= 0) {
        throw UndefinedError("energy savings are undefined for a zero baseline");
    }
    if (candidate == baseline) return 0.0;
    return 100.0 * static_cast<double>(baseline.watt_epochs - candidate.watt_epochs) /
           static_cast<double>(baseline.watt_epochs);
}

} // namespace greenshop
