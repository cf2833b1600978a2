#include "greenshop/experiment.hpp"

#include "greenshop/csv.hpp"
#include "greenshop/errors.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/serialization.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdio>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace greenshop {

namespace {

using io::json;

struct InstanceCell {
    int n_jobs;
    int k_tasks;
    int n_machines;
    FleetKind fleet;
    std::uint64_t seed;
};

std::vector<InstanceCell> expand_grid(const ExperimentSpec &spec) {
    std::vector<InstanceCell> cells;
    for (int n : spec.n_jobs) {
        for (int k : spec.k_tasks) {
            for (int m : spec.n_machines) {
                for (FleetKind f : spec.fleets) {
                    for (std::uint64_t seed : spec.seeds) cells.push_back({n, k, m, f, seed});
                }
            }
        }
    }
    return cells;
}

GeneratorConfig generator_config(const ExperimentSpec &spec, const InstanceCell &cell) {
    GeneratorConfig c;
    c.n_jobs = cell.n_jobs;
    c.k_tasks = cell.k_tasks;
    c.n_machines = cell.n_machines;
    c.fleet_kind = cell.fleet;
    c.duration_mean_epochs = spec.duration_mean_epochs;
    c.arrival_window_epochs = spec.arrival_window_epochs;
    c.seed = cell.seed;
    return c;
}

std::string instance_stem(const InstanceCell &cell) {
    std::ostringstream s;
    s << "n" << cell.n_jobs << "_k" << cell.k_tasks << "_m" << cell.n_machines << "_" << to_string(cell.fleet)
      << "_seed" << cell.seed;
    return s.str();
}

std::string file_safe(std::string text) {
    for (char &c : text) {
        const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
                          c == '-' || c == '_';
        if (!keep) c = '_';
    }
    return text;
}

Epoch draw_offset(const TraceSource &source, std::size_t trace_index, std::uint64_t seed) {
    if (source.offset_jitter <= 1) return 0;
    Sampler rng(seed * 0x100000001b3ULL + trace_index);
    return static_cast<Epoch>(rng.uniform_below(static_cast<std::uint64_t>(source.offset_jitter)));
}

/// Hourly CSV sources are read once and shared by all workers.
class TraceCache {
public:
    explicit TraceCache(const ExperimentSpec &spec) {
        for (const auto &source : spec.traces) {
            std::optional<CarbonTrace> loaded;
            if (source.csv) {
                try {
                    loaded = load_hourly_csv(*source.csv, source.csv_row_offset);
                } catch (const Error &e) {
                    errors_.emplace_back(e.what());
                    loaded_.push_back(std::nullopt);
                    continue;
                }
            }
            errors_.emplace_back();
            loaded_.push_back(std::move(loaded));
        }
    }

    /// Trace for one instance, covering at least `length` epochs when the
    /// source allows it.
    [[nodiscard]] CarbonTrace get(const ExperimentSpec &spec, std::size_t index, Epoch offset, Epoch length) const {
        const TraceSource &source = spec.traces[index];
        if (!errors_[index].empty()) throw TraceExhaustedError(errors_[index]);
        if (source.synthetic) {
            const SyntheticTrace &s = *source.synthetic;
            return synthetic_sinusoid(s.mean, s.amplitude, s.period_epochs, s.phase_epochs + offset, length);
        }
        return loaded_[index]->slice(offset);
    }

private:
    std::vector<std::optional<CarbonTrace>> loaded_;
    std::vector<std::string> errors_;
};

double ms(const std::chrono::duration<double, std::milli> &d) { return d.count(); }

std::vector<ResultRow> run_instance(const ExperimentSpec &spec, const TraceCache &traces, const InstanceCell &cell) {
    std::vector<ResultRow> rows;
    ResultRow base;
    base.n_jobs = cell.n_jobs;
    base.k_tasks = cell.k_tasks;
    base.n_machines = cell.n_machines;
    base.fleet = cell.fleet;
    base.seed = cell.seed;

    std::optional<Instance> instance;
    std::optional<SolveResult> baseline;
    std::string setup_error;
    try {
        instance = generate(generator_config(spec, cell));
        SolveConfig stage1;
        stage1.objective = ObjectiveKind::Makespan;
        stage1.node_limit = spec.limits.node_limit;
        stage1.time_limit = spec.limits.time_limit;
        baseline = solve(*instance, nullptr, stage1);
        if (spec.out_dir) {
            io::write_json_file(*spec.out_dir / "instances" / (instance_stem(cell) + ".json"), io::to_json(*instance));
            io::write_json_file(*spec.out_dir / "schedules" / (instance_stem(cell) + "__baseline.json"),
                                io::to_json(baseline->schedule));
        }
    } catch (const std::exception &e) {
        setup_error = e.what();
    }

    for (std::size_t ti = 0; ti < spec.traces.size(); ++ti) {
        ResultRow trace_row = base;
        trace_row.trace = spec.traces[ti].name;
        trace_row.trace_offset = draw_offset(spec.traces[ti], ti, cell.seed);
        std::optional<CarbonTrace> trace;
        std::string trace_error = setup_error;
        if (trace_error.empty()) {
            trace_row.opt_makespan = baseline->report.makespan;
            trace_row.baseline_energy_kwh = baseline->report.energy_kwh();
            trace_row.baseline_utilization = baseline->report.utilization;
            trace_row.baseline_proven_optimal = baseline->proven_optimal;
            trace_row.baseline_wall_ms = ms(baseline->wall_time);
            try {
                trace = traces.get(spec, ti, trace_row.trace_offset, instance->horizon);
                trace_row.baseline_carbon_g = carbon(*instance, baseline->schedule, *trace).grams();
            } catch (const std::exception &e) {
                trace_error = e.what();
            }
        }
        for (ObjectiveKind objective : spec.objectives) {
            // Stretch factors run in ascending order so each stage 2 can
            // start from the schedule found under the next tighter bound.
            std::vector<std::size_t> order(spec.stretches.size());
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) { return spec.stretches[a] < spec.stretches[b]; });
            std::vector<ResultRow> by_stretch(spec.stretches.size());
            std::optional<Schedule> previous;
            for (std::size_t si : order) {
                ResultRow row = trace_row;
                row.objective = objective;
                row.stretch = spec.stretches[si];
                if (!trace_error.empty()) {
                    row.error = trace_error;
                    by_stretch[si] = std::move(row);
                    continue;
                }
                try {
                    const BilevelResult r = solve_bilevel(*instance, *trace, objective, row.stretch, spec.limits,
                                                          *baseline, previous ? &*previous : nullptr);
                    previous = r.constrained.schedule;
                    row.makespan_bound = r.stretched_bound;
                    row.makespan = r.constrained.report.makespan;
                    row.carbon_g = r.constrained.report.carbon_g();
                    row.energy_kwh = r.constrained.report.energy_kwh();
                    row.carbon_savings_pct = r.carbon_savings_pct;
                    row.energy_savings_pct = r.energy_savings_pct;
                    row.utilization = r.constrained.report.utilization;
                    row.proven_optimal = r.constrained.proven_optimal;
                    row.nodes = r.constrained.nodes_explored;
                    row.wall_ms = ms(r.constrained.wall_time);
                    if (spec.out_dir) {
                        row.schedule_file = "schedules/" + instance_stem(cell) + "__" + file_safe(row.trace) + "__" +
                                            to_string(objective) + "__S" + file_safe(row.stretch.to_string()) +
                                            ".json";
                        io::write_json_file(*spec.out_dir / row.schedule_file, io::to_json(r.constrained.schedule));
                    }
                } catch (const std::exception &e) {
                    row.error = e.what();
                }
                by_stretch[si] = std::move(row);
            }
            for (auto &row : by_stretch) rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::vector<std::string> fields_of(const ResultRow &r) {
    return {std::to_string(r.n_jobs),
            std::to_string(r.k_tasks),
            std::to_string(r.n_machines),
            to_string(r.fleet),
            std::to_string(r.seed),
            csv_field(r.trace),
            std::to_string(r.trace_offset),
            to_string(r.objective),
            r.stretch.to_string(),
            std::to_string(r.opt_makespan),
            std::to_string(r.makespan_bound),
            std::to_string(r.makespan),
            format_double(r.baseline_carbon_g),
            format_double(r.carbon_g),
            format_double(r.baseline_energy_kwh),
            format_double(r.energy_kwh),
            format_double(r.carbon_savings_pct),
            format_double(r.energy_savings_pct),
            format_double(r.baseline_utilization),
            format_double(r.utilization),
            r.baseline_proven_optimal ? "true" : "false",
            r.proven_optimal ? "true" : "false",
            std::to_string(r.nodes),
            format_double(r.baseline_wall_ms),
            format_double(r.wall_ms),
            csv_field(r.schedule_file),
            csv_field(r.error)};
}

bool parse_bool(const std::string &s) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ParseError("expected true or false, got '" + s + "'");
}

template <typename T>
T parse_number(const std::string &s) {
    std::istringstream in(s);
    in.imbue(std::locale::classic());
    T v{};
    in >> v;
    if (in.fail() || !in.eof()) throw ParseError("not a number: '" + s + "'");
    return v;
}

} // namespace

void ExperimentSpec::validate() const {
    auto nonempty = [](bool empty, const char *what) {
        if (empty) throw ConfigError(std::string("experiment grid axis '") + what + "' is empty");
    };
    nonempty(n_jobs.empty(), "n_jobs");
    nonempty(k_tasks.empty(), "k_tasks");
    nonempty(n_machines.empty(), "n_machines");
    nonempty(fleets.empty(), "fleet_kind");
    nonempty(seeds.empty(), "seeds");
    nonempty(traces.empty(), "traces");
    nonempty(stretches.empty(), "stretches");
    nonempty(objectives.empty(), "objectives");
    for (int n : n_jobs) {
        for (int k : k_tasks) {
            for (int m : n_machines) {
                GeneratorConfig c;
                c.n_jobs = n;
                c.k_tasks = k;
                c.n_machines = m;
                c.duration_mean_epochs = duration_mean_epochs;
                c.arrival_window_epochs = arrival_window_epochs;
                c.validate();
            }
        }
    }
    for (const auto &t : traces) {
        if (t.name.empty()) throw ConfigError("every trace source needs a name");
        if (t.csv.has_value() == t.synthetic.has_value()) {
            throw ConfigError("trace '" + t.name + "' must set exactly one of csv and synthetic");
        }
        if (t.offset_jitter < 0) throw ConfigError("trace '" + t.name + "' has a negative offset_jitter");
        if (t.synthetic) {
            if (t.synthetic->period_epochs <= 0) throw ConfigError("trace '" + t.name + "' needs a positive period");
            if (t.synthetic->amplitude > t.synthetic->mean || t.synthetic->amplitude < 0) {
                throw ConfigError("trace '" + t.name + "' needs 0 <= amplitude <= mean");
            }
        }
    }
    for (const auto &s : stretches) {
        if (s < Rational(1)) throw ConfigError("stretch factors must be >= 1, got " + s.to_string());
    }
    for (ObjectiveKind o : objectives) {
        if (o == ObjectiveKind::Makespan) throw ConfigError("experiment objectives must be carbon or energy");
    }
    if (threads == 0) throw ConfigError("threads must be positive");
    if (limits.node_limit && *limits.node_limit == 0) throw ConfigError("node_limit must be positive");
}

ExperimentSpec experiment_spec_from_json(const nlohmann::json &j) {
    if (!j.is_object()) throw ConfigError("experiment spec must be a JSON object");
    ExperimentSpec spec;
    try {
        spec.name = j.value("name", spec.name);
        const json grid = j.value("grid", json::object());
        auto int_list = [&](const char *key, std::vector<int> &out) {
            if (!grid.contains(key)) return;
            const json &v = grid.at(key);
            out = v.is_array() ? v.get<std::vector<int>>() : std::vector<int>{v.get<int>()};
        };
        int_list("n_jobs", spec.n_jobs);
        int_list("k_tasks", spec.k_tasks);
        int_list("n_machines", spec.n_machines);
        if (grid.contains("fleet_kind")) {
            const json &v = grid.at("fleet_kind");
            spec.fleets.clear();
            for (const auto &f : v.is_array() ? v : json::array({v})) {
                spec.fleets.push_back(parse_fleet_kind(f.get<std::string>()));
            }
        }
        if (grid.contains("seeds")) {
            const json &v = grid.at("seeds");
            if (v.is_array()) {
                spec.seeds = v.get<std::vector<std::uint64_t>>();
            } else {
                const auto first = v.value("first", std::uint64_t{1});
                const auto count = v.at("count").get<std::uint64_t>();
                for (std::uint64_t i = 0; i < count; ++i) spec.seeds.push_back(first + i);
            }
        }
        if (grid.contains("duration_mean_epochs")) {
            const json &v = grid.at("duration_mean_epochs");
            spec.duration_mean_epochs =
                v.is_string() ? Rational::parse(v.get<std::string>()) : Rational(v.get<std::int64_t>());
        }
        spec.arrival_window_epochs = grid.value("arrival_window_epochs", spec.arrival_window_epochs);

        for (const auto &t : j.value("traces", json::array())) {
            TraceSource source;
            source.name = t.value("name", std::string());
            if (t.contains("csv")) source.csv = t.at("csv").get<std::string>();
            source.csv_row_offset = t.value("offset", std::size_t{0});
            if (t.contains("synthetic")) {
                const json &s = t.at("synthetic");
                SyntheticTrace syn;
                syn.mean = s.value("mean", syn.mean);
                syn.amplitude = s.value("amplitude", syn.amplitude);
                syn.period_epochs = s.value("period", syn.period_epochs);
                syn.phase_epochs = s.value("phase", syn.phase_epochs);
                source.synthetic = syn;
            }
            source.offset_jitter = t.value("offset_jitter", Epoch{0});
            spec.traces.push_back(std::move(source));
        }
        if (j.contains("stretches")) {
            spec.stretches.clear();
            for (const auto &s : j.at("stretches")) {
                spec.stretches.push_back(s.is_string() ? Rational::parse(s.get<std::string>())
                                                       : Rational(s.get<std::int64_t>()));
            }
        }
        if (j.contains("objectives")) {
            spec.objectives.clear();
            for (const auto &o : j.at("objectives")) spec.objectives.push_back(parse_objective(o.get<std::string>()));
        }
        const json limits = j.value("limits", json::object());
        if (limits.contains("node_limit") && !limits.at("node_limit").is_null()) {
            spec.limits.node_limit = limits.at("node_limit").get<std::uint64_t>();
        }
        if (limits.contains("time_limit_ms") && !limits.at("time_limit_ms").is_null()) {
            spec.limits.time_limit = std::chrono::milliseconds(limits.at("time_limit_ms").get<std::int64_t>());
        }
        spec.threads = j.value("threads", spec.threads);
        if (j.contains("out_dir")) spec.out_dir = j.at("out_dir").get<std::string>();
    } catch (const nlohmann::json::exception &e) {
        throw ConfigError(std::string("malformed experiment spec: ") + e.what());
    } catch (const ParseError &e) {
        throw ConfigError(std::string("malformed experiment spec: ") + e.what());
    }
    spec.validate();
    return spec;
}

const std::vector<std::string> &result_columns() {
    static const std::vector<std::string> columns = {
        "n_jobs",         "k_tasks",         "n_machines",          "fleet",
        "seed",           "trace",           "trace_offset",        "objective",
        "stretch",        "opt_makespan",    "makespan_bound",      "makespan",
        "baseline_carbon_g", "carbon_g",     "baseline_energy_kwh", "energy_kwh",
        "carbon_savings_pct", "energy_savings_pct", "baseline_utilization", "utilization",
        "baseline_proven_optimal", "proven_optimal", "nodes",       "baseline_wall_ms",
        "wall_ms",        "schedule_file",   "error"};
    return columns;
}

void write_csv_header(std::ostream &out) {
    const auto &cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
}

void write_csv_row(std::ostream &out, const ResultRow &row) {
    const auto fields = fields_of(row);
    for (std::size_t i = 0; i < fields.size(); ++i) out << (i ? "," : "") << fields[i];
    out << '\n';
}

CsvReadResult read_csv(std::istream &in) {
    CsvReadResult result;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("results CSV is empty");
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < header.size(); ++i) index[header[i]] = i;
    for (const auto &c : result_columns()) {
        if (!index.count(c)) throw ParseError("results CSV header lacks column '" + c + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto f = split_csv_line(line);
        if (f.size() != header.size()) {
            result.warnings.push_back("line " + std::to_string(line_no) + ": expected " +
                                      std::to_string(header.size()) + " fields, got " + std::to_string(f.size()));
            continue;
        }
        auto get = [&](const char *c) -> const std::string & { return f[index.at(c)]; };
        try {
            ResultRow r;
            r.n_jobs = parse_number<int>(get("n_jobs"));
            r.k_tasks = parse_number<int>(get("k_tasks"));
            r.n_machines = parse_number<int>(get("n_machines"));
            r.fleet = parse_fleet_kind(get("fleet"));
            r.seed = parse_number<std::uint64_t>(get("seed"));
            r.trace = get("trace");
            r.trace_offset = parse_number<Epoch>(get("trace_offset"));
            r.objective = parse_objective(get("objective"));
            r.stretch = Rational::parse(get("stretch"));
            r.opt_makespan = parse_number<Epoch>(get("opt_makespan"));
            r.makespan_bound = parse_number<Epoch>(get("makespan_bound"));
            r.makespan = parse_number<Epoch>(get("makespan"));
            r.baseline_carbon_g = parse_number<double>(get("baseline_carbon_g"));
            r.carbon_g = parse_number<double>(get("carbon_g"));
            r.baseline_energy_kwh = parse_number<double>(get("baseline_energy_kwh"));
            r.energy_kwh = parse_number<double>(get("energy_kwh"));
            r.carbon_savings_pct = parse_number<double>(get("carbon_savings_pct"));
            r.energy_savings_pct = parse_number<double>(get("energy_savings_pct"));
            r.baseline_utilization = parse_number<double>(get("baseline_utilization"));
            r.utilization = parse_number<double>(get("utilization"));
            r.baseline_proven_optimal = parse_bool(get("baseline_proven_optimal"));
            r.proven_optimal = parse_bool(get("proven_optimal"));
            r.nodes = parse_number<std::uint64_t>(get("nodes"));
            r.baseline_wall_ms = parse_number<double>(get("baseline_wall_ms"));
            r.wall_ms = parse_number<double>(get("wall_ms"));
            r.schedule_file = get("schedule_file");
            r.error = get("error");
            result.rows.push_back(std::move(r));
        } catch (const std::exception &e) {
            result.warnings.push_back("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return result;
}

std::vector<ResultRow> run_experiment(const ExperimentSpec &spec,
                                      const std::function<void(const ResultRow &)> &on_row) {
    spec.validate();
    const auto cells = expand_grid(spec);
    const TraceCache traces(spec);

    std::vector<std::optional<std::vector<ResultRow>>> done(cells.size());
    std::mutex mutex;
    std::condition_variable ready;
    std::size_t next = 0;

    auto worker = [&] {
        while (true) {
            std::size_t i;
            {
                std::lock_guard lock(mutex);
                if (next == cells.size()) return;
                i = next++;
            }
            auto rows = run_instance(spec, traces, cells[i]);
            {
                std::lock_guard lock(mutex);
                done[i] = std::move(rows);
            }
            ready.notify_all();
        }
    };
    const std::size_t workers = std::min(spec.threads, cells.size());
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);

    // The calling thread is the single writer: it hands rows over in grid order.
    std::vector<ResultRow> all;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        std::vector<ResultRow> rows;
        {
            std::unique_lock lock(mutex);
            ready.wait(lock, [&] { return done[i].has_value(); });
            rows = std::move(*done[i]);
            done[i].reset();
        }
        for (auto &row : rows) {
            if (on_row) on_row(row);
            all.push_back(std::move(row));
        }
    }
    for (auto &t : pool) t.join();
    return all;
}

std::vector<SummaryRow> summarize(const std::vector<ResultRow> &rows) {
    std::vector<SummaryRow> groups;
    auto same = [](const SummaryRow &g, const ResultRow &r) {
        return g.fleet == r.fleet && g.n_jobs == r.n_jobs && g.k_tasks == r.k_tasks && g.n_machines == r.n_machines &&
               g.trace == r.trace && g.objective == r.objective && g.stretch == r.stretch;
    };
    for (const auto &r : rows) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const SummaryRow &g) { return same(g, r); });
        if (it == groups.end()) {
            SummaryRow g;
            g.fleet = r.fleet;
            g.n_jobs = r.n_jobs;
            g.k_tasks = r.k_tasks;
            g.n_machines = r.n_machines;
            g.trace = r.trace;
            g.objective = r.objective;
            g.stretch = r.stretch;
            groups.push_back(g);
            it = groups.end() - 1;
        }
        ++it->rows;
        if (!r.ok()) {
            ++it->failures;
            continue;
        }
        if (r.proven_optimal) ++it->proven;
        it->carbon_savings_pct += r.carbon_savings_pct;
        it->energy_savings_pct += r.energy_savings_pct;
        it->makespan += static_cast<double>(r.makespan);
        it->utilization += r.utilization;
    }
    for (auto &g : groups) {
        const std::size_t ok = g.rows - g.failures;
        if (ok == 0) continue;
        const auto n = static_cast<double>(ok);
        g.carbon_savings_pct /= n;
        g.energy_savings_pct /= n;
        g.makespan /= n;
        g.utilization /= n;
    }
    return groups;
}

void write_summary_csv(std::ostream &out, const std::vector<SummaryRow> &summary) {
    out << "fleet,n_jobs,k_tasks,n_machines,trace,objective,stretch,rows,failures,proven_optimal,"
           "mean_carbon_savings_pct,mean_energy_savings_pct,mean_makespan,mean_utilization\n";
    for (const auto &g : summary) {
        out << to_string(g.fleet) << ',' << g.n_jobs << ',' << g.k_tasks << ',' << g.n_machines << ','
            << csv_field(g.trace) << ',' << to_string(g.objective) << ',' << g.stretch.to_string() << ',' << g.rows
            << ',' << g.failures << ',' << g.proven << ',' << format_double(g.carbon_savings_pct) << ','
            << format_double(g.energy_savings_pct) << ',' << format_double(g.makespan) << ','
            << format_double(g.utilization) << '\n';
    }
}

void write_summary_table(std::ostream &out, const std::vector<SummaryRow> &summary) {
    out << std::left << std::setw(14) << "fleet" << std::right << std::setw(4) << "n" << std::setw(4) << "k"
        << std::setw(4) << "M" << "  " << std::left << std::setw(16) << "trace" << std::setw(9) << "objective"
        << std::right << std::setw(6) << "S" << std::setw(6) << "rows" << std::setw(6) << "fail" << std::setw(7)
        << "exact" << std::setw(12) << "carbon sav%" << std::setw(12) << "energy sav%" << std::setw(10)
        << "makespan" << std::setw(8) << "util%" << '\n';
    out << std::fixed << std::setprecision(2);
    for (const auto &g : summary) {
        out << std::left << std::setw(14) << to_string(g.fleet) << std::right << std::setw(4) << g.n_jobs
            << std::setw(4) << g.k_tasks << std::setw(4) << g.n_machines << "  " << std::left << std::setw(16)
            << g.trace << std::setw(9) << to_string(g.objective) << std::right << std::setw(6)
            << g.stretch.to_string() << std::setw(6) << g.rows << std::setw(6) << g.failures << std::setw(7)
            << g.proven;
        if (g.rows == g.failures) {
            out << std::setw(12) << "n/a" << std::setw(12) << "n/a" << std::setw(10) << "n/a" << std::setw(8)
                << "n/a";
        } else {
            out << std::setw(12) << g.carbon_savings_pct << std::setw(12) << g.energy_savings_pct << std::setw(10)
                << g.makespan << std::setw(8) << 100.0 * g.utilization;
        }
        out << '\n';
    }
    out << std::defaultfloat << std::setprecision(6);
}

std::string to_string(SeriesAxis axis) {
    switch (axis) {
    case SeriesAxis::Stretch: return "stretch";
    case SeriesAxis::Trace: return "trace";
    case SeriesAxis::Machines: return "n_machines";
    case SeriesAxis::Tasks: return "k_tasks";
    }
    return "unknown";
}

void write_series(std::ostream &out, const std::vector<ResultRow> &rows, SeriesAxis axis) {
    out << "x,objective,fleet,seed,carbon_savings_pct,energy_savings_pct,utilization\n";
    for (const auto &r : rows) {
        if (!r.ok()) continue;
        std::string x;
        switch (axis) {
        case SeriesAxis::Stretch: x = r.stretch.to_string(); break;
        case SeriesAxis::Trace: x = csv_field(r.trace); break;
        case SeriesAxis::Machines: x = std::to_string(r.n_machines); break;
        case SeriesAxis::Tasks: x = std::to_string(r.k_tasks); break;
        }
        out << x << ',' << to_string(r.objective) << ',' << to_string(r.fleet) << ',' << r.seed << ','
            << format_double(r.carbon_savings_pct) << ',' << format_double(r.energy_savings_pct) << ','
            << format_double(r.utilization) << '\n';
    }
}

} // namespace greenshop
