#pragma once

#include "greenshop/model.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/rational.hpp"
#include "greenshop/traces.hpp"

#include <array>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace greenshop {

enum class ObjectiveKind { Makespan, Carbon, Energy };

std::string to_string(ObjectiveKind kind);
ObjectiveKind parse_objective(const std::string &text);

/// Lexicographic key of a schedule under an objective:
///   Makespan: (makespan, 0, 0)
///   Carbon:   (carbon, energy, makespan)
///   Energy:   (energy, carbon, makespan)
struct ObjectiveTuple {
    std::array<std::int64_t, 3> keys{};

    friend auto operator<=>(const ObjectiveTuple &, const ObjectiveTuple &) = default;
};

ObjectiveTuple objective_tuple(ObjectiveKind kind, const ObjectiveReport &report);

struct SolveConfig {
    ObjectiveKind objective = ObjectiveKind::Makespan;
    std::optional<Epoch> makespan_bound;
    std::optional<std::chrono::milliseconds> time_limit;
    std::optional<std::uint64_t> node_limit;
};

struct SolveResult {
    ObjectiveKind objective = ObjectiveKind::Makespan;
    Schedule schedule;
    ObjectiveReport report;
    ObjectiveTuple objective_value;
    bool proven_optimal = false;
    /// False when a wall-clock limit was active; such results may vary run to run.
    bool deterministic = true;
    std::uint64_t nodes_explored = 0;
    std::chrono::duration<double, std::milli> wall_time{0};
};

/// Exact depth-first branch and bound. Returns the lexicographic optimum when
/// the search completes inside the limits, otherwise the best incumbent.
///
/// `trace` may be null only for the Makespan objective. `warm_start`, when
/// given and feasible within the bound, seeds the incumbent.
///
/// Throws InfeasibleError when no schedule fits (or none is found within the
/// limits) and TraceExhaustedError when the trace is too short.
SolveResult solve(const Instance &instance, const CarbonTrace *trace, const SolveConfig &config,
                  const Schedule *warm_start = nullptr);

struct SolveLimits {
    std::optional<std::chrono::milliseconds> time_limit;
    std::optional<std::uint64_t> node_limit;
};

struct BilevelResult {
    Epoch opt_makespan = 0;
    Epoch stretched_bound = 0;
    Rational stretch{1};
    SolveResult baseline;
    SolveResult constrained;
    double carbon_savings_pct = 0;
    double energy_savings_pct = 0;
};

/// floor(stretch * opt_makespan).
Epoch stretched_bound(const Rational &stretch, Epoch opt_makespan);

/// Stage 1 minimizes makespan; stage 2 re-solves `objective` (Carbon or
/// Energy) with makespan <= floor(S * OPT), seeded with the stage-1 schedule.
BilevelResult solve_bilevel(const Instance &instance, const CarbonTrace &trace, ObjectiveKind objective,
                            const Rational &stretch, const SolveLimits &limits);

/// Same as above but reuses an already computed stage-1 result. Stage 2 is
/// additionally seeded with `warm_start` when given, e.g. the result of a
/// smaller stretch factor.
BilevelResult solve_bilevel(const Instance &instance, const CarbonTrace &trace, ObjectiveKind objective,
                            const Rational &stretch, const SolveLimits &limits, const SolveResult &baseline,
                            const Schedule *warm_start = nullptr);

/// List scheduling: repeatedly take the ready task with the earliest possible
/// start and put it on the machine finishing it soonest (ties: faster
/// machine, then lower id). Always fits the default horizon; throws
/// InfeasibleError when a shorter horizon cuts the list schedule off.
Schedule greedy_baseline(const Instance &instance);

} // namespace greenshop
