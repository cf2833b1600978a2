#include "greenshop/errors.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/oracle.hpp"
#include "greenshop/solver.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace greenshop;
using namespace greenshop::test;

namespace {

SolveConfig config(ObjectiveKind kind, std::optional<Epoch> bound = std::nullopt) {
    SolveConfig c;
    c.objective = kind;
    c.makespan_bound = bound;
    return c;
}

} // namespace

TEST_CASE("objective names") {
    for (auto k : {ObjectiveKind::Makespan, ObjectiveKind::Carbon, ObjectiveKind::Energy}) {
        CHECK(parse_objective(to_string(k)) == k);
    }
    CHECK_THROWS_AS(parse_objective("cost"), ConfigError);
}

TEST_CASE("forced single-task schedule") {
    const Instance inst = instance({job(0, 0, {3}, {}, {0})}, {machine(0)});
    const SolveResult r = solve(inst, nullptr, config(ObjectiveKind::Makespan));
    CHECK(r.schedule.assignments.at({0, 0}).start == 0);
    CHECK(r.report.makespan == 3);
    CHECK(r.proven_optimal);
    CHECK(r.deterministic);
}

TEST_CASE("carbon objective moves work into the cheap window") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 4);
    const CarbonTrace trace = trace_g({300, 300, 100, 100});
    const SolveResult r = solve(inst, &trace, config(ObjectiveKind::Carbon, 4));
    CHECK(r.schedule.assignments.at({0, 0}).start == 2);
    CHECK(r.report.carbon_g() == 50.0);
    CHECK(r.proven_optimal);
    Schedule early;
    early.assignments[{0, 0}] = {0, 0, std::nullopt};
    CHECK(carbon(inst, early, trace).grams() == 150.0);
}

TEST_CASE("two jobs on two machines match the oracle") {
    const Instance inst = instance({job(0, 0, {2, 1}, chain_edges(2), {0, 1}), job(1, 1, {1, 2}, chain_edges(2), {0, 1})},
                                   {machine(0), machine(1, Rational(2), Rational(2))}, 7);
    const CarbonTrace trace = trace_g({500, 100, 400, 200, 50, 300, 250});
    const auto all = oracle::enumerate(inst, trace);
    const SolveResult ms = solve(inst, &trace, config(ObjectiveKind::Makespan));
    CHECK(ms.report.makespan == oracle::best(all, ObjectiveKind::Makespan).report.makespan);
    for (Epoch b : {ms.report.makespan, ms.report.makespan + 2}) {
        const auto bounded = oracle::within(all, b);
        for (auto kind : {ObjectiveKind::Carbon, ObjectiveKind::Energy}) {
            const SolveResult r = solve(inst, &trace, config(kind, b));
            REQUIRE(r.proven_optimal);
            CHECK(r.objective_value == objective_tuple(kind, oracle::best(bounded, kind).report));
        }
    }
}

TEST_CASE("solver matches the oracle on random tiny instances") {
    int compared = 0;
    for (std::uint64_t seed = 1000; seed < 1060; ++seed) {
        const Instance inst = tiny_instance(seed);
        const CarbonTrace trace = synthetic_sinusoid(300, 250, 12, static_cast<std::int64_t>(seed % 12), inst.horizon);
        const auto all = oracle::enumerate(inst, trace);
        if (all.empty()) {
            CHECK_THROWS_AS(solve(inst, &trace, config(ObjectiveKind::Makespan)), InfeasibleError);
            continue;
        }
        const SolveResult ms = solve(inst, &trace, config(ObjectiveKind::Makespan));
        REQUIRE(ms.proven_optimal);
        CHECK(ms.report.makespan == oracle::best(all, ObjectiveKind::Makespan).report.makespan);
        const SolveResult c = solve(inst, &trace, config(ObjectiveKind::Carbon, ms.report.makespan + 1));
        CHECK(c.objective_value ==
              objective_tuple(ObjectiveKind::Carbon,
                              oracle::best(oracle::within(all, ms.report.makespan + 1), ObjectiveKind::Carbon).report));
        ++compared;
    }
    CHECK(compared > 40);
}

TEST_CASE("solver input errors") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 4);
    const CarbonTrace trace = trace_g({1, 1, 1, 1});
    CHECK_THROWS_AS(solve(Instance{{}, {machine(0)}, 4}, nullptr, config(ObjectiveKind::Makespan)), ParameterError);
    CHECK_THROWS_AS(solve(inst, nullptr, config(ObjectiveKind::Carbon)), ParameterError);
    CHECK_THROWS_AS(solve(inst, &trace, config(ObjectiveKind::Carbon, 1)), InfeasibleError);
    CHECK_THROWS_AS(solve(inst, &trace, config(ObjectiveKind::Makespan, 0)), ParameterError);
    const CarbonTrace short_trace = trace_g({1, 1});
    CHECK_THROWS_AS(solve(inst, &short_trace, config(ObjectiveKind::Carbon)), TraceExhaustedError);
    SolveConfig zero_nodes = config(ObjectiveKind::Makespan);
    zero_nodes.node_limit = 0;
    CHECK_THROWS_AS(solve(inst, nullptr, zero_nodes), ParameterError);
}

TEST_CASE("stretched bound") {
    CHECK(stretched_bound(Rational(2), 10) == 20);
    CHECK(stretched_bound(Rational(3, 2), 85) == 127);
    CHECK(stretched_bound(Rational(1), 7) == 7);
    CHECK_THROWS_AS(stretched_bound(Rational(1, 2), 7), ParameterError);
}

TEST_CASE("bilevel on a constant trace and homogeneous fleet saves nothing") {
    GeneratorConfig c;
    c.n_jobs = 3;
    c.k_tasks = 2;
    c.n_machines = 2;
    c.seed = 4;
    const Instance inst = generate(c);
    const CarbonTrace flat = synthetic_sinusoid(250, 0, 96, 0, inst.horizon);
    for (const Rational s : {Rational(1), Rational(2)}) {
        const BilevelResult r = solve_bilevel(inst, flat, ObjectiveKind::Carbon, s, {});
        CHECK(r.carbon_savings_pct == 0.0);
        CHECK(r.energy_savings_pct == 0.0);
    }
}

TEST_CASE("bilevel respects the stretched bound and nests in S") {
    GeneratorConfig c;
    c.n_jobs = 3;
    c.k_tasks = 2;
    c.n_machines = 2;
    c.seed = 9;
    const Instance inst = generate(c);
    const CarbonTrace trace = synthetic_sinusoid(300, 250, 96, 30, inst.horizon);
    const BilevelResult one = solve_bilevel(inst, trace, ObjectiveKind::Carbon, Rational(1), {});
    const BilevelResult two = solve_bilevel(inst, trace, ObjectiveKind::Carbon, Rational(2), {}, one.baseline);
    REQUIRE(one.constrained.proven_optimal);
    REQUIRE(two.constrained.proven_optimal);
    CHECK(one.stretched_bound == one.opt_makespan);
    CHECK(two.stretched_bound == 2 * one.opt_makespan);
    CHECK(two.constrained.report.makespan <= two.stretched_bound);
    CHECK(two.constrained.report.carbon->scaled <= one.constrained.report.carbon->scaled);
    CHECK(one.constrained.report.carbon->scaled <= one.baseline.report.carbon->scaled);
    CHECK(one.carbon_savings_pct >= 0.0);
    CHECK_THROWS_AS(solve_bilevel(inst, trace, ObjectiveKind::Makespan, Rational(1), {}), ParameterError);
}

TEST_CASE("greedy baseline") {
    const Instance chain = instance({job(0, 0, {2, 3, 4}, chain_edges(3), {0})}, {machine(0)});
    const Schedule s = greedy_baseline(chain);
    CHECK(makespan(chain, s) == 9);
    CHECK(s.assignments.at({0, 1}).start == 2);
    const Instance pair = instance({job(0, 0, {3}, {}, {0, 1}), job(1, 0, {3}, {}, {0, 1})}, {machine(0), machine(1)});
    const Schedule p = greedy_baseline(pair);
    CHECK(p.assignments.at({0, 0}).start == 0);
    CHECK(p.assignments.at({1, 0}).start == 0);
    CHECK(p.assignments.at({0, 0}).machine_id != p.assignments.at({1, 0}).machine_id);
    const Instance het = instance({job(0, 0, {4}, {}, {0, 1})}, {machine(0), machine(1, Rational(2), Rational(2))});
    CHECK(greedy_baseline(het).assignments.at({0, 0}).machine_id == 1);
}

TEST_CASE("greedy makespan never beats the exact optimum") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        GeneratorConfig c;
        c.n_jobs = 3;
        c.k_tasks = 3;
        c.n_machines = 2;
        c.fleet_kind = seed % 2 ? FleetKind::Heterogeneous : FleetKind::Homogeneous;
        c.seed = seed;
        const Instance inst = generate(c);
        const Schedule g = greedy_baseline(inst);
        REQUIRE(check_feasible(inst, g).ok());
        const SolveResult r = solve(inst, nullptr, config(ObjectiveKind::Makespan));
        REQUIRE(r.proven_optimal);
        CHECK(makespan(inst, g) >= r.report.makespan);
    }
}

TEST_CASE("node limits make results reproducible") {
    GeneratorConfig c;
    c.n_jobs = 6;
    c.k_tasks = 3;
    c.n_machines = 3;
    c.seed = 2;
    const Instance inst = generate(c);
    const CarbonTrace trace = synthetic_sinusoid(300, 240, 96, 17, inst.horizon);
    SolveLimits limits;
    limits.node_limit = 20000;
    const BilevelResult a = solve_bilevel(inst, trace, ObjectiveKind::Carbon, Rational(3, 2), limits);
    const BilevelResult b = solve_bilevel(inst, trace, ObjectiveKind::Carbon, Rational(3, 2), limits);
    CHECK(a.constrained.schedule == b.constrained.schedule);
    CHECK(a.constrained.nodes_explored == b.constrained.nodes_explored);
    CHECK(a.constrained.nodes_explored <= 20000);
    CHECK_FALSE(a.constrained.proven_optimal);
    CHECK(check_feasible(inst, a.constrained.schedule).ok());
    CHECK(a.carbon_savings_pct >= 0.0);
}

TEST_CASE("monotone trace shift leaves the carbon argmin on homogeneous fleets") {
    GeneratorConfig c;
    c.n_jobs = 3;
    c.k_tasks = 2;
    c.n_machines = 2;
    c.seed = 21;
    const Instance inst = generate(c);
    const CarbonTrace base = synthetic_sinusoid(300, 250, 96, 0, inst.horizon);
    std::vector<std::int64_t> shifted = base.mg_per_kwh();
    for (auto &v : shifted) v += 55000;
    const CarbonTrace up(shifted, "shifted");
    const SolveResult ms = solve(inst, nullptr, config(ObjectiveKind::Makespan));
    const SolveResult a = solve(inst, &base, config(ObjectiveKind::Carbon, ms.report.makespan + 10));
    const SolveResult b = solve(inst, &up, config(ObjectiveKind::Carbon, ms.report.makespan + 10));
    REQUIRE(a.proven_optimal);
    REQUIRE(b.proven_optimal);
    CHECK(b.report.carbon->scaled - a.report.carbon->scaled == 55000 * a.report.energy.watt_epochs);
    CHECK(carbon(inst, a.schedule, up).scaled == b.report.carbon->scaled);
}

TEST_CASE("greedy reports a list schedule cut off by a short horizon") {
    const Instance serial = instance({job(0, 0, {3, 3}, chain_edges(2), {0})}, {machine(0)}, 5);
    CHECK_THROWS_AS(greedy_baseline(serial), InfeasibleError);
    CHECK_THROWS_AS(solve(serial, nullptr, config(ObjectiveKind::Makespan)), InfeasibleError);
    const Instance fits = instance({job(0, 0, {3, 3}, chain_edges(2), {0})}, {machine(0)}, 6);
    CHECK(makespan(fits, greedy_baseline(fits)) == 6);
}
