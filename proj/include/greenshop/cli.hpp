#pragma once

#include "greenshop/experiment.hpp"
#include "greenshop/traces.hpp"

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace greenshop::cli {

/// Where a command gets its carbon trace from.
struct TraceSpec {
    std::optional<std::filesystem::path> csv;
    std::size_t csv_row_offset = 0;
    std::optional<SyntheticTrace> synthetic;

    [[nodiscard]] bool empty() const { return !csv && !synthetic; }
    /// Synthetic traces are generated with `length` epochs.
    [[nodiscard]] CarbonTrace load(Epoch length) const;
};

/// Parses "mean,amp,period,phase". Throws ConfigError.
SyntheticTrace parse_synthetic(const std::string &text);

/// Validates every seed's config first, then writes `inst_<seed>.json`
/// into `out_dir`. Returns the written paths.
std::vector<std::filesystem::path> cmd_gen(const GeneratorConfig &base, const std::vector<std::uint64_t> &seeds,
                                           const std::filesystem::path &out_dir);

struct SolveRequest {
    std::filesystem::path instance;
    TraceSpec trace;
    std::optional<ObjectiveKind> objective;
    /// Absent: makespan-only mode.
    std::optional<Rational> stretch;
    SolveLimits limits;
};
/// Returns the result.v1 document.
nlohmann::json cmd_solve(const SolveRequest &request);

struct ExperimentOutcome {
    std::vector<ResultRow> rows;
    std::vector<SummaryRow> summary;
    std::filesystem::path results_csv;
};
/// Streams rows to `<out>/results.csv`, then writes `summary.csv` and
/// `summary.txt` next to it.
ExperimentOutcome cmd_exp(ExperimentSpec spec, const std::filesystem::path &out_dir);

struct VerifyRequest {
    std::filesystem::path instance;
    std::filesystem::path schedule;
    TraceSpec trace;
    bool oracle = false;
    ObjectiveKind objective = ObjectiveKind::Makespan;
    std::optional<Epoch> makespan_bound;
};
struct VerifyOutcome {
    bool feasible = false;
    nlohmann::json document;
};
VerifyOutcome cmd_verify(const VerifyRequest &request);

struct ReportOutcome {
    std::vector<SummaryRow> summary;
    std::size_t rows = 0;
    std::vector<std::string> warnings;
    std::vector<std::filesystem::path> files;
};
/// Writes summary.csv, summary.txt and series_<axis>.csv into `out_dir`.
ReportOutcome cmd_report(const std::filesystem::path &results_csv, const std::filesystem::path &out_dir);

/// Entry point behind the `greenshop` executable. Exit status: 0 on
/// success, 1 on a reported error or an infeasible verify, 2 on bad usage.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace greenshop::cli
