#include "greenshop/errors.hpp"
#include "greenshop/generator.hpp"
#include "greenshop/serialization.hpp"

#include <doctest.h>

#include <cmath>
#include <map>

using namespace greenshop;

TEST_CASE("fleets") {
    for (const auto &m : make_fleet(FleetKind::Homogeneous, 3)) {
        CHECK(m.power_kw == Rational(1));
        CHECK(m.speed == Rational(1));
    }
    const auto het = make_fleet(FleetKind::Heterogeneous, 7);
    const std::vector<Rational> kw{Rational(1, 4), Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};
    const std::vector<Rational> speed{Rational(1, 3), Rational(1, 2), Rational(1), Rational(4, 3), Rational(2)};
    REQUIRE(het.size() == 7);
    for (std::size_t i = 0; i < het.size(); ++i) {
        CHECK(het[i].id == static_cast<int>(i));
        CHECK(het[i].power_kw == kw[i % 5]);
        CHECK(het[i].speed == speed[i % 5]);
    }
    CHECK_THROWS_AS(make_fleet(FleetKind::Homogeneous, 0), ConfigError);
}

TEST_CASE("dag templates") {
    using E = std::vector<Edge>;
    CHECK(instantiate_template(DagTemplate::Chain, 4) == E{{0, 1}, {1, 2}, {2, 3}});
    CHECK(instantiate_template(DagTemplate::FanOut, 4) == E{{0, 1}, {0, 2}, {0, 3}});
    CHECK(instantiate_template(DagTemplate::TwoBranch, 4) == E{{0, 1}, {1, 2}, {0, 3}});
    CHECK(instantiate_template(DagTemplate::TwoBranch, 3) == E{{0, 1}, {0, 2}});
    CHECK(instantiate_template(DagTemplate::TwoBranch, 6) == E{{0, 1}, {1, 2}, {2, 3}, {0, 4}, {4, 5}});
    CHECK(instantiate_template(DagTemplate::Chain, 1).empty());
    CHECK_THROWS_AS(instantiate_template(DagTemplate::TwoBranch, 2), TemplateError);
}

TEST_CASE("duration discretization") {
    CHECK(discretize_duration(0.2) == 1);
    CHECK(discretize_duration(6.01) == 7);
    CHECK(discretize_duration(7.0) == 7);
    CHECK(discretize_duration(0.0) == 1);
}

TEST_CASE("sampler draws are in range and reproducible") {
    Sampler a(5);
    Sampler b(5);
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.uniform_below(7);
        CHECK(x < 7);
        CHECK(x == b.uniform_below(7));
        const double u = a.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(u == b.uniform01());
    }
}

TEST_CASE("sampled duration mean matches the geometric tail sum") {
    // E[max(1, ceil(Exp(7)))] = 1 / (1 - exp(-1/7)), evaluated independently.
    constexpr double kExpected = 7.511900714632573;
    Sampler rng(99);
    double total = 0;
    constexpr int n = 200000;
    for (int i = 0; i < n; ++i) total += static_cast<double>(sample_duration(rng, Rational(7)));
    CHECK(total / n == doctest::Approx(kExpected).epsilon(0.01));
    CHECK(total / n >= 6.8);
    CHECK(total / n <= 7.8);
}

TEST_CASE("generate honours the config and is deterministic") {
    GeneratorConfig c;
    c.seed = 42;
    const Instance a = generate(c);
    CHECK(a.jobs.size() == 10);
    CHECK(a.machines.size() == 5);
    for (const auto &j : a.jobs) {
        CHECK(j.tasks.size() == 4);
        CHECK(j.arrival >= 0);
        CHECK(j.arrival <= 95);
        CHECK_NOTHROW(topological_order(j));
        for (const auto &t : j.tasks) CHECK(t.eligible_machines.size() == 5);
    }
    CHECK(a.horizon == default_horizon(a));
    CHECK(io::to_json(generate(c)).dump() == io::to_json(a).dump());
    c.seed = 43;
    CHECK_FALSE(generate(c) == a);
}

TEST_CASE("generator config validation") {
    GeneratorConfig c;
    c.k_tasks = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    CHECK_THROWS_AS(generate(c), ConfigError);
    c = {};
    c.duration_mean_epochs = Rational(0);
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = {};
    c.arrival_window_epochs = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("templates and arrivals are uniform across seeds") {
    // Template frequencies and arrival buckets against uniform expectations,
    // chi-square at the 0.1% level.
    std::map<std::string, int> shapes;
    std::vector<int> buckets(8, 0);
    int jobs = 0;
    for (std::uint64_t seed = 0; seed < 600; ++seed) {
        GeneratorConfig c;
        c.seed = seed;
        c.k_tasks = 4;
        for (const auto &j : generate(c).jobs) {
            if (j.edges == instantiate_template(DagTemplate::Chain, 4)) {
                ++shapes["chain"];
            } else if (j.edges == instantiate_template(DagTemplate::FanOut, 4)) {
                ++shapes["fan"];
            } else {
                CHECK(j.edges == instantiate_template(DagTemplate::TwoBranch, 4));
                ++shapes["two"];
            }
            ++buckets[static_cast<std::size_t>(j.arrival / 12)];
            ++jobs;
        }
    }
    double chi_shapes = 0;
    for (const auto &[name, count] : shapes) {
        const double e = jobs / 3.0;
        chi_shapes += (count - e) * (count - e) / e;
    }
    CHECK(chi_shapes < 13.82);  // 2 degrees of freedom
    double chi_arrivals = 0;
    for (int count : buckets) {
        const double e = jobs / 8.0;
        chi_arrivals += (count - e) * (count - e) / e;
    }
    CHECK(chi_arrivals < 24.32);  // 7 degrees of freedom
}

TEST_CASE("two-task jobs fall back to chain and fan-out shapes") {
    GeneratorConfig c;
    c.k_tasks = 2;
    c.seed = 3;
    for (const auto &j : generate(c).jobs) CHECK(j.edges == std::vector<Edge>{{0, 1}});
    c.k_tasks = 1;
    for (const auto &j : generate(c).jobs) CHECK(j.edges.empty());
}
