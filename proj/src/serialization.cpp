#include "greenshop/serialization.hpp"

#include "greenshop/errors.hpp"

#include <fstream>

namespace greenshop::io {

namespace {

void expect_schema(const json &j, const char *schema) {
    if (!j.is_object() || !j.contains("schema") || j.at("schema") != schema) {
        throw ParseError(std::string("expected a '") + schema + "' document");
    }
}

Rational rational_field(const json &j, const char *name) {
    const json &v = j.at(name);
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number_integer()) return Rational(v.get<std::int64_t>());
    throw ParseError(std::string("field '") + name + "' must be a decimal string");
}

template <typename Fn>
auto guarded(const char *what, Fn &&fn) {
    try {
        return fn();
    } catch (const json::exception &e) {
        throw ParseError(std::string("malformed ") + what + ": " + e.what());
    }
}

} // namespace

json to_json(const Instance &instance) {
    json machines = json::array();
    for (const auto &m : instance.machines) {
        machines.push_back({{"id", m.id}, {"power_kw", m.power_kw.to_string()}, {"speed", m.speed.to_string()}});
    }
    json jobs = json::array();
    for (const auto &job : instance.jobs) {
        json tasks = json::array();
        for (const auto &t : job.tasks) {
            tasks.push_back({{"task_index", t.task_index},
                             {"base_duration", t.base_duration},
                             {"eligible_machines", t.eligible_machines}});
        }
        json edges = json::array();
        for (auto [u, v] : job.edges) edges.push_back({u, v});
        jobs.push_back({{"id", job.id}, {"arrival", job.arrival}, {"tasks", tasks}, {"edges", edges}});
    }
    return {{"schema", kInstanceSchema}, {"horizon", instance.horizon}, {"machines", machines}, {"jobs", jobs}};
}

Instance instance_from_json(const json &j) {
    expect_schema(j, kInstanceSchema);
    Instance inst = guarded("instance", [&] {
        Instance out;
        for (const auto &m : j.at("machines")) {
            out.machines.push_back({m.at("id").get<int>(), rational_field(m, "power_kw"), rational_field(m, "speed")});
        }
        for (const auto &jj : j.at("jobs")) {
            Job job;
            job.id = jj.at("id").get<int>();
            job.arrival = jj.at("arrival").get<Epoch>();
            for (const auto &t : jj.at("tasks")) {
                job.tasks.push_back({job.id, t.at("task_index").get<int>(), t.at("base_duration").get<Epoch>(),
                                     t.at("eligible_machines").get<std::vector<int>>()});
            }
            for (const auto &e : jj.at("edges")) {
                job.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
            }
            out.jobs.push_back(std::move(job));
        }
        out.horizon = j.contains("horizon") ? j.at("horizon").get<Epoch>() : default_horizon(out);
        return out;
    });
    validate(inst);
    return inst;
}

json to_json(const Schedule &schedule) {
    json assignments = json::array();
    for (const auto &[key, a] : schedule.assignments) {
        json entry = {{"job_id", key.job_id}, {"task_index", key.task_index}, {"machine_id", a.machine_id},
                      {"start", a.start}};
        if (a.completion) entry["completion"] = *a.completion;
        assignments.push_back(std::move(entry));
    }
    return {{"schema", kScheduleSchema}, {"assignments", assignments}};
}

Schedule schedule_from_json(const json &j) {
    expect_schema(j, kScheduleSchema);
    return guarded("schedule", [&] {
        Schedule s;
        for (const auto &a : j.at("assignments")) {
            const TaskKey key{a.at("job_id").get<int>(), a.at("task_index").get<int>()};
            Assignment asg{a.at("machine_id").get<int>(), a.at("start").get<Epoch>(), std::nullopt};
            if (a.contains("completion")) asg.completion = a.at("completion").get<Epoch>();
            if (!s.assignments.emplace(key, asg).second) {
                throw ParseError("schedule assigns " + to_string(key) + " more than once");
            }
        }
        return s;
    });
}

json to_json(const CarbonTrace &trace) {
    json values = json::array();
    for (auto mg : trace.mg_per_kwh()) values.push_back(static_cast<double>(mg) / 1000.0);
    return {{"schema", kTraceSchema}, {"label", trace.label()}, {"intensities", values}};
}

CarbonTrace trace_from_json(const json &j) {
    expect_schema(j, kTraceSchema);
    return guarded("trace", [&] {
        return CarbonTrace::from_grams(j.at("intensities").get<std::vector<double>>(),
                                       j.value("label", std::string("trace")));
    });
}

json to_json(const GeneratorConfig &c) {
    return {{"n_jobs", c.n_jobs},
            {"k_tasks", c.k_tasks},
            {"n_machines", c.n_machines},
            {"fleet_kind", to_string(c.fleet_kind)},
            {"duration_mean_epochs", c.duration_mean_epochs.to_string()},
            {"arrival_window_epochs", c.arrival_window_epochs},
            {"seed", c.seed}};
}

GeneratorConfig generator_config_from_json(const json &j) {
    if (!j.is_object()) {
        throw ConfigError("generator config must be a JSON object");
    }
    GeneratorConfig c;
    try {
        c.n_jobs = j.value("n_jobs", c.n_jobs);
        c.k_tasks = j.value("k_tasks", c.k_tasks);
        c.n_machines = j.value("n_machines", c.n_machines);
        if (j.contains("fleet_kind")) c.fleet_kind = parse_fleet_kind(j.at("fleet_kind").get<std::string>());
        if (j.contains("duration_mean_epochs")) c.duration_mean_epochs = rational_field(j, "duration_mean_epochs");
        c.arrival_window_epochs = j.value("arrival_window_epochs", c.arrival_window_epochs);
        c.seed = j.value("seed", c.seed);
    } catch (const json::exception &e) {
        throw ConfigError(std::string("malformed generator config: ") + e.what());
    }
    return c;
}

json to_json(const ObjectiveReport &report) {
    json j = {{"makespan", report.makespan},
              {"energy_kwh", report.energy_kwh()},
              {"utilization", report.utilization}};
    if (report.carbon) j["carbon_g"] = report.carbon_g();
    return j;
}

json to_json(const SolveResult &r) {
    return {{"objective", to_string(r.objective)},
            {"schedule", to_json(r.schedule)},
            {"report", to_json(r.report)},
            {"objective_tuple", r.objective_value.keys},
            {"proven_optimal", r.proven_optimal},
            {"deterministic", r.deterministic},
            {"nodes_explored", r.nodes_explored},
            {"wall_time_ms", r.wall_time.count()}};
}

json to_json(const BilevelResult &r) {
    return {{"opt_makespan", r.opt_makespan},
            {"stretch", r.stretch.to_string()},
            {"makespan_bound", r.stretched_bound},
            {"baseline", to_json(r.baseline)},
            {"constrained", to_json(r.constrained)},
            {"carbon_savings_pct", r.carbon_savings_pct},
            {"energy_savings_pct", r.energy_savings_pct}};
}

json result_document(const SolveResult &baseline) {
    return {{"schema", kResultSchema},
            {"mode", "makespan"},
            {"opt_makespan", baseline.report.makespan},
            {"baseline", to_json(baseline)}};
}

json result_document(const BilevelResult &result) {
    json j = to_json(result);
    j["schema"] = kResultSchema;
    j["mode"] = "bilevel";
    return j;
}

json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path &path, const json &j) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    out << j.dump(2) << '\n';
}

} // namespace greenshop::io
