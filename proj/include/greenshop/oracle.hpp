#pragma once

#include "greenshop/model.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/solver.hpp"
#include "greenshop/traces.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace greenshop::oracle {

inline constexpr std::uint64_t kDefaultLeafCap = 10'000'000;

struct Entry {
    Schedule schedule;
    ObjectiveReport report;
};

/// Product over tasks of (eligible machines x start epochs that fit in the horizon).
std::uint64_t leaf_count(const Instance &instance);

/// Tries every (machine, start) combination inside the horizon and keeps
/// those that pass check_feasible and the optional makespan bound. Entries
/// come out in odometer order over tasks sorted by (job id, task index).
/// Throws OracleScaleError when leaf_count exceeds `leaf_cap`.
std::vector<Entry> enumerate(const Instance &instance, const CarbonTrace &trace,
                             std::optional<Epoch> makespan_bound = std::nullopt,
                             std::uint64_t leaf_cap = kDefaultLeafCap);

/// Lexicographic minimum under the objective's tie-break chain; the earliest
/// entry wins among equal tuples. Throws InfeasibleError when empty.
const Entry &best(const std::vector<Entry> &enumeration, ObjectiveKind objective);

/// Entries whose makespan is within `bound`.
std::vector<Entry> within(const std::vector<Entry> &enumeration, Epoch bound);

} // namespace greenshop::oracle
