#pragma once

#include "greenshop/model.hpp"
#include "greenshop/traces.hpp"
#include "greenshop/units.hpp"

#include <optional>

namespace greenshop {

struct ObjectiveReport {
    Epoch makespan = 0;
    Energy energy;
    /// Absent when the schedule was evaluated without a trace.
    std::optional<Carbon> carbon;
    double utilization = 0;

    [[nodiscard]] double energy_kwh() const { return energy.kwh(); }
    [[nodiscard]] double carbon_g() const { return carbon ? carbon->grams() : 0.0; }
};

// The evaluators below assume a feasible schedule; run check_feasible first.

Epoch makespan(const Instance &instance, const Schedule &schedule);

Energy energy(const Instance &instance, const Schedule &schedule);

/// Throws TraceExhaustedError if any occupied epoch lies past the trace.
Carbon carbon(const Instance &instance, const Schedule &schedule, const CarbonTrace &trace);

/// Busy machine-epochs over machines x makespan. Throws UndefinedError on zero makespan.
double utilization(const Instance &instance, const Schedule &schedule);

ObjectiveReport evaluate(const Instance &instance, const Schedule &schedule, const CarbonTrace *trace);

/// 100 * (1 - candidate / baseline). Throws UndefinedError when baseline <= 0.
double savings(double baseline_value, double candidate_value);

/// Exact-integer variants for carbon and energy.
double savings(Carbon baseline, Carbon candidate);
double savings(Energy baseline, Energy candidate);

} // namespace greenshop
