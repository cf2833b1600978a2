#include "greenshop/cli.hpp"

#include "greenshop/errors.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/oracle.hpp"
#include "greenshop/serialization.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

namespace greenshop::cli {

namespace {

using io::json;

std::vector<std::uint64_t> seeds_from_json(const json &j) {
    std::vector<std::uint64_t> seeds;
    if (!j.contains("seeds")) return seeds;
    const json &v = j.at("seeds");
    if (v.is_array()) return v.get<std::vector<std::uint64_t>>();
    const auto first = v.value("first", std::uint64_t{1});
    const auto count = v.at("count").get<std::uint64_t>();
    for (std::uint64_t i = 0; i < count; ++i) seeds.push_back(first + i);
    return seeds;
}

json violations_json(const FeasibilityReport &report) {
    json out = json::array();
    for (const auto &v : report.violations) {
        json tasks = json::array();
        for (const auto &t : v.tasks) tasks.push_back(to_string(t));
        out.push_back({{"family", to_string(v.family)}, {"tasks", tasks}, {"epochs", v.epochs}, {"message", v.message}});
    }
    return out;
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

} // namespace

CarbonTrace TraceSpec::load(Epoch length) const {
    if (csv && synthetic) throw ConfigError("give either --trace or --synthetic, not both");
    if (csv) return load_hourly_csv(*csv, csv_row_offset);
    if (synthetic) {
        return synthetic_sinusoid(synthetic->mean, synthetic->amplitude, synthetic->period_epochs,
                                  synthetic->phase_epochs, length);
    }
    throw ConfigError("this command needs a carbon trace (--trace or --synthetic)");
}

SyntheticTrace parse_synthetic(const std::string &text) {
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string part;
    while (std::getline(in, part, ',')) parts.push_back(part);
    if (parts.size() != 4) throw ConfigError("--synthetic expects mean,amp,period,phase; got '" + text + "'");
    try {
        std::size_t used = 0;
        SyntheticTrace s;
        s.mean = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw std::invalid_argument(parts[0]);
        s.amplitude = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw std::invalid_argument(parts[1]);
        s.period_epochs = std::stoll(parts[2], &used);
        if (used != parts[2].size()) throw std::invalid_argument(parts[2]);
        s.phase_epochs = std::stoll(parts[3], &used);
        if (used != parts[3].size()) throw std::invalid_argument(parts[3]);
        return s;
    } catch (const std::logic_error &) {
        throw ConfigError("--synthetic expects numbers mean,amp,period,phase; got '" + text + "'");
    }
}

std::vector<std::filesystem::path> cmd_gen(const GeneratorConfig &base, const std::vector<std::uint64_t> &seeds,
                                           const std::filesystem::path &out_dir) {
    if (seeds.empty()) throw ConfigError("no seeds given");
    std::vector<Instance> instances;
    for (std::uint64_t seed : seeds) {
        GeneratorConfig c = base;
        c.seed = seed;
        c.validate();
        instances.push_back(generate(c));
    }
    std::vector<std::filesystem::path> written;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const auto path = out_dir / ("inst_" + std::to_string(seeds[i]) + ".json");
        io::write_json_file(path, io::to_json(instances[i]));
        written.push_back(path);
    }
    return written;
}

json cmd_solve(const SolveRequest &request) {
    const Instance instance = io::instance_from_json(io::read_json_file(request.instance));
    const bool bilevel = request.stretch.has_value();
    const ObjectiveKind objective = request.objective.value_or(bilevel ? ObjectiveKind::Carbon : ObjectiveKind::Makespan);
    if (bilevel && objective == ObjectiveKind::Makespan) {
        throw ConfigError("--stretch needs --objective carbon or energy");
    }
    if (!bilevel && objective != ObjectiveKind::Makespan) {
        throw ConfigError("--objective " + to_string(objective) + " needs --stretch");
    }
    std::optional<CarbonTrace> trace;
    if (!request.trace.empty() || bilevel) trace = request.trace.load(instance.horizon);

    SolveConfig stage1;
    stage1.objective = ObjectiveKind::Makespan;
    stage1.node_limit = request.limits.node_limit;
    stage1.time_limit = request.limits.time_limit;
    SolveResult baseline = solve(instance, trace ? &*trace : nullptr, stage1);
    if (!bilevel) return io::result_document(baseline);
    return io::result_document(solve_bilevel(instance, *trace, objective, *request.stretch, request.limits, baseline));
}

ExperimentOutcome cmd_exp(ExperimentSpec spec, const std::filesystem::path &out_dir) {
    spec.out_dir = out_dir;
    spec.validate();
    std::filesystem::create_directories(out_dir);
    ExperimentOutcome outcome;
    outcome.results_csv = out_dir / "results.csv";
    std::ofstream csv(outcome.results_csv);
    if (!csv) throw Error("cannot write " + outcome.results_csv.string());
    write_csv_header(csv);
    outcome.rows = run_experiment(spec, [&](const ResultRow &row) {
        write_csv_row(csv, row);
        csv.flush();
    });
    outcome.summary = summarize(outcome.rows);
    std::ostringstream summary_csv;
    write_summary_csv(summary_csv, outcome.summary);
    write_text(out_dir / "summary.csv", summary_csv.str());
    std::ostringstream table;
    write_summary_table(table, outcome.summary);
    write_text(out_dir / "summary.txt", table.str());
    return outcome;
}

VerifyOutcome cmd_verify(const VerifyRequest &request) {
    const Instance instance = io::instance_from_json(io::read_json_file(request.instance));
    const Schedule schedule = io::schedule_from_json(io::read_json_file(request.schedule));
    std::optional<CarbonTrace> trace;
    if (!request.trace.empty()) trace = request.trace.load(instance.horizon);

    VerifyOutcome outcome;
    const FeasibilityReport verdict = check_feasible(instance, schedule);
    outcome.feasible = verdict.ok();
    outcome.document = {{"feasible", verdict.ok()}, {"violations", violations_json(verdict)}};
    if (!verdict.ok()) return outcome;

    const ObjectiveReport report = evaluate(instance, schedule, trace ? &*trace : nullptr);
    outcome.document["report"] = io::to_json(report);
    if (!request.oracle) return outcome;

    if (request.objective != ObjectiveKind::Makespan && !trace) {
        throw ConfigError("--oracle with a " + to_string(request.objective) + " objective needs a trace");
    }
    try {
        const CarbonTrace flat(std::vector<std::int64_t>(static_cast<std::size_t>(instance.horizon), 0), "zero");
        const CarbonTrace &used = trace ? *trace : flat;
        const auto entries = oracle::enumerate(instance, used, request.makespan_bound);
        const auto &best = oracle::best(entries, request.objective);
        const ObjectiveReport mine = evaluate(instance, schedule, &used);
        const ObjectiveTuple a = objective_tuple(request.objective, mine);
        const ObjectiveTuple b = objective_tuple(request.objective, best.report);
        double gap = 0;
        switch (request.objective) {
        case ObjectiveKind::Makespan: gap = static_cast<double>(a.keys[0] - b.keys[0]); break;
        case ObjectiveKind::Carbon: gap = Carbon{a.keys[0] - b.keys[0]}.grams(); break;
        case ObjectiveKind::Energy: gap = Energy{a.keys[0] - b.keys[0]}.kwh(); break;
        }
        outcome.document["oracle"] = {{"objective", to_string(request.objective)},
                                      {"feasible_schedules", entries.size()},
                                      {"optimum", io::to_json(best.report)},
                                      {"optimum_tuple", b.keys},
                                      {"schedule_tuple", a.keys},
                                      {"gap", gap},
                                      {"optimal", !(b < a)}};
    } catch (const OracleScaleError &e) {
        outcome.document["oracle"] = {{"skipped", e.what()}};
    }
    return outcome;
}

ReportOutcome cmd_report(const std::filesystem::path &results_csv, const std::filesystem::path &out_dir) {
    std::ifstream in(results_csv);
    if (!in) throw ParseError("cannot open " + results_csv.string());
    const CsvReadResult read = read_csv(in);
    ReportOutcome outcome;
    outcome.rows = read.rows.size();
    outcome.warnings = read.warnings;
    outcome.summary = summarize(read.rows);

    std::ostringstream summary_csv;
    write_summary_csv(summary_csv, outcome.summary);
    outcome.files.push_back(out_dir / "summary.csv");
    write_text(outcome.files.back(), summary_csv.str());
    std::ostringstream table;
    write_summary_table(table, outcome.summary);
    outcome.files.push_back(out_dir / "summary.txt");
    write_text(outcome.files.back(), table.str());
    for (SeriesAxis axis : {SeriesAxis::Stretch, SeriesAxis::Trace, SeriesAxis::Machines, SeriesAxis::Tasks}) {
        std::ostringstream series;
        write_series(series, read.rows, axis);
        outcome.files.push_back(out_dir / ("series_" + to_string(axis) + ".csv"));
        write_text(outcome.files.back(), series.str());
    }
    return outcome;
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Carbon-aware flexible job-shop scheduling toolkit", "greenshop"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string trace_csv;
    std::size_t trace_offset = 0;
    std::string synthetic;
    std::string objective_text;
    std::string stretch_text;
    std::optional<std::int64_t> time_limit_ms;
    std::optional<std::uint64_t> node_limit;
    std::string out_path;
    std::string instance_path;
    std::string schedule_path;
    std::string results_path;
    bool use_oracle = false;
    std::optional<Epoch> bound;
    std::optional<std::size_t> threads;

    auto add_trace = [&](CLI::App *cmd) {
        cmd->add_option("--trace", trace_csv, "Hourly CSV with timestamp and carbon_intensity columns");
        cmd->add_option("--trace-offset", trace_offset, "First CSV data row to use");
        cmd->add_option("--synthetic", synthetic, "Sinusoid trace mean,amp,period,phase (g/kWh, epochs)");
    };
    auto add_limits = [&](CLI::App *cmd) {
        cmd->add_option("--time-limit", time_limit_ms, "Wall-clock limit per solve in milliseconds");
        cmd->add_option("--node-limit", node_limit, "Search node limit per solve");
    };

    CLI::App *gen = app.add_subcommand("gen", "Generate instance files");
    gen->add_option("--config", config_path, "Generator config JSON")->required();
    gen->add_option("--seed", seed, "Single seed, overriding the config");
    gen->add_option("--out", out_path, "Output directory (default: current directory)");

    CLI::App *solve_cmd = app.add_subcommand("solve", "Solve one instance");
    solve_cmd->add_option("instance", instance_path, "instance.v1 JSON file")->required();
    add_trace(solve_cmd);
    solve_cmd->add_option("--objective", objective_text, "makespan, carbon or energy");
    solve_cmd->add_option("--stretch", stretch_text, "Stretch factor S for the constrained stage");
    add_limits(solve_cmd);
    solve_cmd->add_option("--out", out_path, "Result file (default: standard output)");

    CLI::App *exp = app.add_subcommand("exp", "Run an experiment grid");
    exp->add_option("--config", config_path, "Experiment spec JSON")->required();
    add_limits(exp);
    exp->add_option("--threads", threads, "Worker threads");
    exp->add_option("--out", out_path, "Output directory (default: results)");

    CLI::App *verify = app.add_subcommand("verify", "Check a schedule against an instance");
    verify->add_option("instance", instance_path, "instance.v1 JSON file")->required();
    verify->add_option("schedule", schedule_path, "schedule.v1 JSON file")->required();
    add_trace(verify);
    verify->add_flag("--oracle", use_oracle, "Compare with the brute-force optimum");
    verify->add_option("--objective", objective_text, "Objective for --oracle (default: makespan)");
    verify->add_option("--bound", bound, "Makespan bound for --oracle");

    CLI::App *report = app.add_subcommand("report", "Aggregate a results CSV");
    report->add_option("results", results_path, "results.csv from exp")->required();
    report->add_option("--out", out_path, "Output directory (default: next to the CSV)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    auto trace_spec = [&] {
        TraceSpec t;
        if (!trace_csv.empty()) t.csv = trace_csv;
        t.csv_row_offset = trace_offset;
        if (!synthetic.empty()) t.synthetic = parse_synthetic(synthetic);
        return t;
    };
    auto limits = [&] {
        SolveLimits l;
        l.node_limit = node_limit;
        if (time_limit_ms) l.time_limit = std::chrono::milliseconds(*time_limit_ms);
        return l;
    };

    try {
        if (gen->parsed()) {
            const json j = io::read_json_file(config_path);
            const GeneratorConfig base = io::generator_config_from_json(j);
            std::vector<std::uint64_t> seeds;
            try {
                seeds = seeds_from_json(j);
            } catch (const json::exception &e) {
                throw ConfigError(std::string("malformed seeds: ") + e.what());
            }
            if (seed) seeds = {*seed};
            if (seeds.empty()) seeds = {base.seed};
            for (const auto &p : cmd_gen(base, seeds, out_path.empty() ? "." : out_path)) out << p.string() << '\n';
        } else if (solve_cmd->parsed()) {
            SolveRequest r;
            r.instance = instance_path;
            r.trace = trace_spec();
            if (!objective_text.empty()) r.objective = parse_objective(objective_text);
            if (!stretch_text.empty()) r.stretch = Rational::parse(stretch_text);
            r.limits = limits();
            const json doc = cmd_solve(r);
            if (out_path.empty()) {
                out << doc.dump(2) << '\n';
            } else {
                io::write_json_file(out_path, doc);
                out << out_path << '\n';
            }
        } else if (exp->parsed()) {
            ExperimentSpec spec = experiment_spec_from_json(io::read_json_file(config_path));
            if (node_limit) spec.limits.node_limit = node_limit;
            if (time_limit_ms) spec.limits.time_limit = std::chrono::milliseconds(*time_limit_ms);
            if (threads) spec.threads = *threads;
            const ExperimentOutcome o = cmd_exp(spec, out_path.empty() ? "results" : out_path);
            write_summary_table(out, o.summary);
            std::size_t failed = 0;
            for (const auto &row : o.rows) failed += row.ok() ? 0 : 1;
            out << o.rows.size() << " rows, " << failed << " failed; results in " << o.results_csv.string() << '\n';
        } else if (verify->parsed()) {
            VerifyRequest r;
            r.instance = instance_path;
            r.schedule = schedule_path;
            r.trace = trace_spec();
            r.oracle = use_oracle;
            r.objective = parse_objective(objective_text.empty() ? "makespan" : objective_text);
            r.makespan_bound = bound;
            const VerifyOutcome o = cmd_verify(r);
            out << o.document.dump(2) << '\n';
            if (!o.feasible) {
                err << "schedule is infeasible\n";
                return 1;
            }
        } else if (report->parsed()) {
            const std::filesystem::path csv = results_path;
            const std::filesystem::path dir = out_path.empty() ? csv.parent_path() : std::filesystem::path(out_path);
            const ReportOutcome o = cmd_report(csv, dir.empty() ? std::filesystem::path(".") : dir);
            write_summary_table(out, o.summary);
            for (const auto &w : o.warnings) err << "warning: " << w << '\n';
            out << o.rows << " rows read, " << o.warnings.size() << " malformed rows skipped\n";
        }
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

} // namespace greenshop::cli
