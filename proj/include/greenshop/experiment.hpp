#pragma once

#include "greenshop/generator.hpp"
#include "greenshop/rational.hpp"
#include "greenshop/solver.hpp"
#include "greenshop/traces.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace greenshop {

struct SyntheticTrace {
    double mean = 300;
    double amplitude = 240;
    std::int64_t period_epochs = 96;
    std::int64_t phase_epochs = 0;
};

/// One grid region. Exactly one of `csv` and `synthetic` is set.
struct TraceSource {
    std::string name;
    std::optional<std::filesystem::path> csv;
    /// First hourly CSV data row used.
    std::size_t csv_row_offset = 0;
    std::optional<SyntheticTrace> synthetic;
    /// Each instance starts the trace at an extra epoch offset drawn
    /// uniformly from [0, offset_jitter) with the instance seed.
    Epoch offset_jitter = 0;
};

struct ExperimentSpec {
    std::string name = "experiment";
    std::vector<int> n_jobs{6};
    std::vector<int> k_tasks{3};
    std::vector<int> n_machines{3};
    std::vector<FleetKind> fleets{FleetKind::Homogeneous};
    std::vector<std::uint64_t> seeds;
    Rational duration_mean_epochs{7};
    Epoch arrival_window_epochs = 96;
    std::vector<TraceSource> traces;
    std::vector<Rational> stretches{Rational(1), Rational(3, 2), Rational(2)};
    std::vector<ObjectiveKind> objectives{ObjectiveKind::Carbon};
    SolveLimits limits;
    std::size_t threads = 1;
    /// When set, instances and schedules are written below this directory.
    std::optional<std::filesystem::path> out_dir;

    /// Throws ConfigError on an empty grid axis or an unusable trace source.
    void validate() const;
};

ExperimentSpec experiment_spec_from_json(const nlohmann::json &j);

/// One (instance, trace, objective, stretch) cell. On failure `error` holds
/// the message and the measurement fields keep their zero defaults.
struct ResultRow {
    int n_jobs = 0;
    int k_tasks = 0;
    int n_machines = 0;
    FleetKind fleet = FleetKind::Homogeneous;
    std::uint64_t seed = 0;
    std::string trace;
    Epoch trace_offset = 0;
    ObjectiveKind objective = ObjectiveKind::Carbon;
    Rational stretch{1};
    Epoch opt_makespan = 0;
    Epoch makespan_bound = 0;
    Epoch makespan = 0;
    double baseline_carbon_g = 0;
    double carbon_g = 0;
    double baseline_energy_kwh = 0;
    double energy_kwh = 0;
    double carbon_savings_pct = 0;
    double energy_savings_pct = 0;
    double baseline_utilization = 0;
    double utilization = 0;
    bool baseline_proven_optimal = false;
    bool proven_optimal = false;
    std::uint64_t nodes = 0;
    double baseline_wall_ms = 0;
    double wall_ms = 0;
    std::string schedule_file;
    std::string error;

    [[nodiscard]] bool ok() const { return error.empty(); }
};

/// Results CSV columns, in order. Wall-time columns end in `_wall_ms` or
/// are `wall_ms`.
const std::vector<std::string> &result_columns();
void write_csv_header(std::ostream &out);
void write_csv_row(std::ostream &out, const ResultRow &row);

struct CsvReadResult {
    std::vector<ResultRow> rows;
    /// One message per skipped line.
    std::vector<std::string> warnings;
};
/// Throws ParseError when the header is missing columns; bad data lines are
/// skipped and reported in `warnings`.
CsvReadResult read_csv(std::istream &in);

/// Runs every cell. Rows come out ordered by grid position (n, k, M, fleet,
/// seed), then trace, objective and stretch, regardless of `threads`.
/// `on_row`, when given, sees each row in that order as soon as it and its
/// predecessors are done.
std::vector<ResultRow> run_experiment(const ExperimentSpec &spec,
                                      const std::function<void(const ResultRow &)> &on_row = {});

/// Mean over the successful rows of one cell group.
struct SummaryRow {
    FleetKind fleet = FleetKind::Homogeneous;
    int n_jobs = 0;
    int k_tasks = 0;
    int n_machines = 0;
    std::string trace;
    ObjectiveKind objective = ObjectiveKind::Carbon;
    Rational stretch{1};
    std::size_t rows = 0;
    std::size_t failures = 0;
    std::size_t proven = 0;
    double carbon_savings_pct = 0;
    double energy_savings_pct = 0;
    double makespan = 0;
    double utilization = 0;
};

/// Groups by (fleet, n, k, M, trace, objective, stretch) in order of first
/// appearance.
std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows);
void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &summary);
/// Fixed-width text table, one line per group.
void write_summary_table(std::ostream &out, const std::vector<SummaryRow> &summary);

/// Long-format series for one axis: one line per successful row with
/// columns x, objective, fleet, seed, carbon_savings_pct,
/// energy_savings_pct, utilization.
enum class SeriesAxis { Stretch, Trace, Machines, Tasks };
std::string to_string(SeriesAxis axis);
void write_series(std::ostream &out, const std::vector<ResultRow> &rows, SeriesAxis axis);

} // namespace greenshop
