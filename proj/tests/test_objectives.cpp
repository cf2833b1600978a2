#include "greenshop/errors.hpp"
#include "greenshop/objectives.hpp"
#include "greenshop/solver.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace greenshop;
using namespace greenshop::test;

namespace {

Schedule place(std::initializer_list<std::tuple<int, int, int, Epoch>> rows) {
    Schedule s;
    for (auto [j, t, m, start] : rows) s.assignments[{j, t}] = {m, start, std::nullopt};
    return s;
}

} // namespace

TEST_CASE("makespan") {
    const Instance one = instance({job(0, 0, {5}, {}, {0})}, {machine(0)});
    CHECK(makespan(one, place({{0, 0, 0, 0}})) == 5);
    const Instance two = instance({job(0, 0, {8}, {}, {0, 1}), job(1, 0, {13}, {}, {0, 1})}, {machine(0), machine(1)});
    CHECK(makespan(two, place({{0, 0, 0, 0}, {1, 0, 1, 0}})) == 13);
}

TEST_CASE("greedy toy schedule: chains (3,2,4) and (2,3) on two machines finish at 9") {
    const Instance inst =
        instance({job(1, 0, {3, 2, 4}, chain_edges(3), {0, 1}), job(2, 0, {2, 3}, chain_edges(2), {0, 1})},
                 {machine(0), machine(1)});
    const Schedule s = greedy_baseline(inst);
    REQUIRE(check_feasible(inst, s).ok());
    CHECK(makespan(inst, s) == 9);
}

TEST_CASE("energy") {
    const Instance four = instance({job(0, 0, {4}, {}, {0})}, {machine(0)});
    CHECK(energy(four, place({{0, 0, 0, 0}})).kwh() == 1.0);
    const Instance fast = instance({job(0, 0, {10}, {}, {0})}, {machine(0, Rational(2), Rational(2))});
    CHECK(energy(fast, place({{0, 0, 0, 0}})).kwh() == 2.5);
}

TEST_CASE("carbon") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 3);
    CHECK(carbon(inst, place({{0, 0, 0, 0}}), trace_g({100, 300, 300})).grams() == 100.0);
    CHECK(carbon(inst, place({{0, 0, 0, 1}}), trace_g({100, 300, 300})).grams() == 150.0);
    CHECK_THROWS_AS(carbon(inst, place({{0, 0, 0, 1}}), trace_g({100, 300})), TraceExhaustedError);
}

TEST_CASE("constant trace makes carbon proportional to energy") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        GeneratorConfig c;
        c.n_jobs = 4;
        c.k_tasks = 3;
        c.n_machines = 3;
        c.fleet_kind = seed % 2 ? FleetKind::Heterogeneous : FleetKind::Homogeneous;
        c.seed = seed;
        const Instance inst = generate(c);
        const Schedule s = greedy_baseline(inst);
        const CarbonTrace t = synthetic_sinusoid(420, 0, 96, 0, inst.horizon);
        CHECK(carbon(inst, s, t).scaled == energy(inst, s).watt_epochs * 420000);
    }
}

TEST_CASE("homogeneous energy is schedule independent") {
    GeneratorConfig c;
    c.n_jobs = 5;
    c.k_tasks = 3;
    c.n_machines = 2;
    c.seed = 11;
    const Instance inst = generate(c);
    Epoch total = 0;
    for (const auto &j : inst.jobs) {
        for (const auto &t : j.tasks) total += t.base_duration;
    }
    const Schedule greedy = greedy_baseline(inst);
    CHECK(energy(inst, greedy).watt_epochs == 1000 * total);
    // A serial schedule on machine 0 uses the same energy.
    Schedule serial;
    Epoch clock = 0;
    for (const auto &j : inst.jobs) {
        for (int v : topological_order(j)) {
            clock = std::max(clock, j.arrival);
            serial.assignments[{j.id, v}] = {0, clock, std::nullopt};
            clock += j.tasks[static_cast<std::size_t>(v)].base_duration;
        }
    }
    REQUIRE(check_feasible(inst, serial).ok());
    CHECK(energy(inst, serial).watt_epochs == 1000 * total);
}

TEST_CASE("utilization") {
    const Instance packed = instance({job(0, 0, {2, 3}, chain_edges(2), {0})}, {machine(0)});
    CHECK(utilization(packed, place({{0, 0, 0, 0}, {0, 1, 0, 2}})) == 1.0);
    const Instance half = instance({job(0, 0, {4}, {}, {0, 1})}, {machine(0), machine(1)});
    CHECK(utilization(half, place({{0, 0, 1, 0}})) == 0.5);
    const Instance empty{{}, {machine(0)}, 1};
    CHECK_THROWS_AS(utilization(empty, Schedule{}), UndefinedError);
}

TEST_CASE("evaluate fills every field") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 3);
    const auto r = evaluate(inst, place({{0, 0, 0, 1}}), nullptr);
    CHECK(r.makespan == 3);
    CHECK_FALSE(r.carbon.has_value());
    const CarbonTrace t = trace_g({100, 300, 300});
    const auto rc = evaluate(inst, place({{0, 0, 0, 1}}), &t);
    CHECK(rc.carbon_g() == 150.0);
    CHECK(rc.energy_kwh() == 0.5);
    CHECK(rc.utilization == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("savings") {
    CHECK(savings(200.0, 150.0) == 25.0);
    CHECK(savings(200.0, 200.0) == 0.0);
    CHECK(savings(100.0, 110.0) == doctest::Approx(-10.0));
    CHECK_THROWS_AS(savings(0.0, 1.0), UndefinedError);
    CHECK(savings(Carbon{8}, Carbon{8}) == 0.0);
    CHECK(savings(Carbon{8}, Carbon{6}) == 25.0);
    CHECK(savings(Energy{3}, Energy{3}) == 0.0);
    CHECK_THROWS_AS(savings(Carbon{0}, Carbon{0}), UndefinedError);
}

TEST_CASE("objectives are invariant under relabeling identical machines") {
    GeneratorConfig c;
    c.n_jobs = 4;
    c.k_tasks = 3;
    c.n_machines = 6;
    c.fleet_kind = FleetKind::Heterogeneous;
    c.seed = 8;
    const Instance inst = generate(c);
    const Schedule s = greedy_baseline(inst);
    Schedule swapped = s;
    for (auto &[key, a] : swapped.assignments) {
        if (a.machine_id == 0) {
            a.machine_id = 5;
        } else if (a.machine_id == 5) {
            a.machine_id = 0;
        }
    }
    REQUIRE(check_feasible(inst, swapped).ok());
    const CarbonTrace t = synthetic_sinusoid(300, 200, 96, 0, inst.horizon);
    const auto a = evaluate(inst, s, &t);
    const auto b = evaluate(inst, swapped, &t);
    CHECK(a.makespan == b.makespan);
    CHECK(a.energy == b.energy);
    CHECK(*a.carbon == *b.carbon);
}
