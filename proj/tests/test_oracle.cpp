#include "greenshop/errors.hpp"
#include "greenshop/oracle.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace greenshop;
using namespace greenshop::test;

namespace {

std::vector<std::vector<Epoch>> start_vectors(const std::vector<oracle::Entry> &entries) {
    std::vector<std::vector<Epoch>> out;
    for (const auto &e : entries) {
        std::vector<Epoch> v;
        for (const auto &[key, a] : e.schedule.assignments) v.push_back(a.start);
        out.push_back(v);
    }
    return out;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

} // namespace

TEST_CASE("single task has one schedule per start") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 4);
    const auto all = oracle::enumerate(inst, trace_g({1, 1, 1, 1}));
    CHECK(start_vectors(all) == std::vector<std::vector<Epoch>>{{0}, {1}, {2}});
}

TEST_CASE("two-task chain in three epochs") {
    const Instance inst = instance({job(0, 0, {1, 1}, chain_edges(2), {0})}, {machine(0)}, 3);
    const auto all = oracle::enumerate(inst, trace_g({1, 1, 1}));
    CHECK(start_vectors(all) == std::vector<std::vector<Epoch>>{{0, 1}, {0, 2}, {1, 2}});
}

TEST_CASE("chain counts follow the stars-and-bars formula") {
    // C(H - sum d + k, k) feasible start vectors for a k-task chain on one machine.
    const std::vector<std::pair<std::vector<Epoch>, Epoch>> cases{
        {{1, 1}, 3}, {{2, 1}, 6}, {{1, 2, 1}, 7}, {{3}, 5}, {{1, 1, 1, 1}, 8}, {{2, 2, 1}, 9}};
    for (const auto &[d, h] : cases) {
        const Instance inst = instance({job(0, 0, d, chain_edges(static_cast<int>(d.size())), {0})}, {machine(0)}, h);
        Epoch sum = 0;
        for (Epoch x : d) sum += x;
        const auto all = oracle::enumerate(inst, trace_g(std::vector<std::int64_t>(static_cast<std::size_t>(h), 1)));
        CHECK(all.size() == binomial(static_cast<std::uint64_t>(h - sum) + d.size(), d.size()));
    }
}

TEST_CASE("every enumerated schedule is feasible and within the bound") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const Instance inst = tiny_instance(seed);
        const CarbonTrace t = synthetic_sinusoid(200, 100, 7, 0, inst.horizon);
        for (const auto &e : oracle::enumerate(inst, t, inst.horizon - 1)) {
            CHECK(check_feasible(inst, e.schedule).ok());
            CHECK(e.report.makespan <= inst.horizon - 1);
        }
    }
}

TEST_CASE("best picks by the tie-break chain and keeps the first of equals") {
    const Instance inst = instance({job(0, 0, {2}, {}, {0, 1})}, {machine(0), machine(1, Rational(2), Rational(2))}, 4);
    // Machine 1 draws twice the power for half the time: same energy, and
    // on a flat trace the same carbon. Makespan breaks the tie.
    const auto all = oracle::enumerate(inst, trace_g({10, 10, 10, 10}));
    const auto &c = oracle::best(all, ObjectiveKind::Carbon);
    CHECK(c.schedule.assignments.at({0, 0}).machine_id == 1);
    CHECK(c.schedule.assignments.at({0, 0}).start == 0);
    const auto &m = oracle::best(all, ObjectiveKind::Makespan);
    CHECK(m.report.makespan == 1);
    CHECK(&m == &all[3]);
    CHECK_THROWS_AS(oracle::best({}, ObjectiveKind::Carbon), InfeasibleError);
}

TEST_CASE("oracle guards against large search spaces") {
    GeneratorConfig c;
    c.n_jobs = 4;
    c.k_tasks = 4;
    c.seed = 1;
    const Instance inst = generate(c);
    CHECK(oracle::leaf_count(inst) > oracle::kDefaultLeafCap);
    CHECK_THROWS_AS(oracle::enumerate(inst, synthetic_sinusoid(1, 0, 1, 0, inst.horizon)), OracleScaleError);
    const Instance small = instance({job(0, 0, {2}, {}, {0})}, {machine(0)}, 4);
    CHECK_THROWS_AS(oracle::enumerate(small, trace_g({1, 1})), TraceExhaustedError);
}
