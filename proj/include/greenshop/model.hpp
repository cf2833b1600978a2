#pragma once

#include "greenshop/rational.hpp"
#include "greenshop/units.hpp"

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace greenshop {

struct Machine {
    int id = 0;
    Rational power_kw{1};
    Rational speed{1};

    /// Power in whole watts; construction via `validate` rejects sub-watt values.
    [[nodiscard]] std::int64_t watts() const;

    friend bool operator==(const Machine &, const Machine &) = default;
};

struct Task {
    int job_id = 0;
    int task_index = 0;
    /// Duration in epochs on a speed-1 machine.
    Epoch base_duration = 1;
    std::vector<int> eligible_machines;

    [[nodiscard]] bool eligible(int machine_id) const;

    friend bool operator==(const Task &, const Task &) = default;
};

/// DAG edge as (predecessor, successor) task indices within one job.
using Edge = std::pair<int, int>;

struct Job {
    int id = 0;
    Epoch arrival = 0;
    std::vector<Task> tasks;
    std::vector<Edge> edges;

    friend bool operator==(const Job &, const Job &) = default;
};

struct Instance {
    std::vector<Job> jobs;
    std::vector<Machine> machines;
    Epoch horizon = 1;

    [[nodiscard]] const Machine &machine(int id) const;
    [[nodiscard]] const Job &job(int id) const;
    [[nodiscard]] std::size_t task_count() const;

    friend bool operator==(const Instance &, const Instance &) = default;
};

/// Identifies a task globally as (job id, task index).
struct TaskKey {
    int job_id = 0;
    int task_index = 0;

    friend auto operator<=>(const TaskKey &, const TaskKey &) = default;
};

std::string to_string(const TaskKey &key);

struct Assignment {
    int machine_id = 0;
    Epoch start = 0;
    /// Optional explicit completion carried by third-party schedule files.
    /// When absent, completion is start + processing time.
    std::optional<Epoch> completion;

    friend bool operator==(const Assignment &, const Assignment &) = default;
};

struct Schedule {
    std::map<TaskKey, Assignment> assignments;

    friend bool operator==(const Schedule &, const Schedule &) = default;
};

/// ceil(base_duration / speed), never below one epoch.
/// Throws EligibilityError when the task cannot run on the machine.
Epoch processing_time(const Task &task, const Machine &machine);

/// Same rounding without the eligibility check.
Epoch scaled_duration(Epoch base_duration, const Rational &speed);

/// max arrival + sum over tasks of the slowest eligible processing time.
/// Placing every task back to back after the last arrival always fits.
Epoch default_horizon(const Instance &instance);

/// Kahn order with ties broken by ascending task index; throws DagError on a cycle.
std::vector<int> topological_order(const Job &job);

/// Checks structural invariants (ids, eligibility, acyclicity, positive
/// durations and power). Throws ParameterError / DagError.
void validate(const Instance &instance);

enum class ConstraintFamily { Arrival, Precedence, Assignment, Completion, NoOverlap, Horizon };

std::string to_string(ConstraintFamily family);

struct Violation {
    ConstraintFamily family;
    std::vector<TaskKey> tasks;
    std::vector<Epoch> epochs;
    std::string message;
};

struct FeasibilityReport {
    std::vector<Violation> violations;

    [[nodiscard]] bool ok() const { return violations.empty(); }
};

/// Verifies arrival, precedence, assignment, completion and no-overlap
/// constraints plus the horizon. Returns every violation found. Throws
/// ReferenceError if the schedule names an unknown task or machine.
FeasibilityReport check_feasible(const Instance &instance, const Schedule &schedule);

} // namespace greenshop
