#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "brute_force.hpp"
#include "dms/errors.hpp"
#include "dms/propagator.hpp"
#include "dms/steady_state.hpp"

using namespace dms;

TEST_CASE("initial network state is the founder with m in-links") {
    for (auto [m, A] : {std::pair<int, double>{1, 1.0}, {2, 0.5}, {5, 5.0}}) {
        const AggregateState s = init_aggregate(ModelParams(m, A));
        CHECK(s.t == 1);
        CHECK(s.probs[static_cast<std::size_t>(m)] == 1.0);
        CHECK(s.mass_sum() == doctest::Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("first aggregate steps match hand enumeration") {
    const ModelParams p(1, 1.0);
    AggregateState s = init_aggregate(p);

    s = step_aggregate(s, p);
    CHECK(s.t == 2);
    CHECK(s.probs[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(s.probs[2] == doctest::Approx(0.5).epsilon(1e-15));

    s = step_aggregate(s, p);
    CHECK(s.t == 3);
    CHECK(s.probs[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(s.probs[1] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(s.probs[2] == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
    CHECK(s.probs[3] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(s.mass_sum() == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("propagate_aggregate hits the same t=3 state") {
    const AggregateState s = propagate_aggregate_to(ModelParams(1, 1.0), 3);
    CHECK(s.probs[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-15));
    CHECK(s.probs[3] == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("exhaustive path enumeration reproduces the aggregate propagator") {
    for (double A : {0.5, 1.0, 2.0}) {
        const ModelParams p(1, A);
        for (std::int64_t T = 1; T <= 6; ++T) {
            const testing::BruteForceResult bf = testing::brute_force(p, T);
            const AggregateState agg = propagate_aggregate_to(p, T);
            for (const auto& [q, mass] : bf.aggregate)
                CHECK(agg.probs[static_cast<std::size_t>(q)] == doctest::Approx(mass).epsilon(1e-14));
        }
    }
}

TEST_CASE("exhaustive path enumeration reproduces per-node distributions") {
    const ModelParams p(1, 1.0);
    const std::int64_t T = 6;
    const testing::BruteForceResult bf = testing::brute_force(p, T);
    for (std::int64_t i = 1; i <= T; ++i) {
        const PerNodeState s = propagate_per_node(p, i, T);
        for (const auto& [q, mass] : bf.per_node[i - 1])
            CHECK(s.probs[static_cast<std::size_t>(q)] == doctest::Approx(mass).epsilon(1e-14));
    }
}

TEST_CASE("multi-link enumeration agrees too") {
    const ModelParams p(2, 1.0);
    const std::int64_t T = 5;
    const testing::BruteForceResult bf = testing::brute_force(p, T);
    const AggregateState agg = propagate_aggregate_to(p, T);
    double checked = 0.0;
    for (const auto& [q, mass] : bf.aggregate) {
        CHECK(agg.probs[static_cast<std::size_t>(q)] == doctest::Approx(mass).epsilon(1e-14));
        checked += mass;
    }
    CHECK(checked == doctest::Approx(1.0).epsilon(1e-13));

    for (std::int64_t i = 1; i <= T; ++i) {
        const PerNodeState s = propagate_per_node(p, i, T);
        for (const auto& [q, mass] : bf.per_node[i - 1])
            CHECK(s.probs[static_cast<std::size_t>(q)] == doctest::Approx(mass).epsilon(1e-14));
    }
}

TEST_CASE("per-node states and bounds") {
    const ModelParams p(1, 1.0);

    const PerNodeState node2 = propagate_per_node(p, 2, 3);
    CHECK(node2.probs[0] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(node2.probs[1] == doctest::Approx(0.25).epsilon(1e-15));

    const PerNodeState founder = propagate_per_node(p, 1, 2);
    CHECK(founder.probs[2] == doctest::Approx(1.0).epsilon(1e-15));

    const PerNodeState birth = propagate_per_node(ModelParams(3, 0.5), 7, 7);
    CHECK(birth.probs[0] == 1.0);

    CHECK_THROWS_AS(propagate_per_node(p, 5, 4), std::domain_error);
}

TEST_CASE("per-node support never exceeds the reachable window") {
    const ModelParams p(2, 0.5);
    for (std::int64_t i : {1, 2, 5}) {
        PerNodeState s = init_per_node(p, i);
        while (s.t < 12) {
            s = step_per_node(s, p);
            const std::int64_t cap = i == 1 ? p.m + p.m * (s.t - 1) : p.m * (s.t - i);
            CHECK(static_cast<std::int64_t>(s.probs.size()) - 1 <= cap);
            CHECK(s.mass_sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("aggregate equals the average of per-node chains") {
    const ModelParams p(2, 0.7);
    const std::int64_t T = 50;
    const AggregateState agg = propagate_aggregate_to(p, T, {0.0, 1u << 23});  // eps = 0

    std::vector<double> averaged(agg.probs.size(), 0.0);
    for (std::int64_t i = 1; i <= T; ++i) {
        const PerNodeState s = propagate_per_node(p, i, T);
        for (std::size_t q = 0; q < s.probs.size(); ++q)
            averaged[q] += s.probs[q] / static_cast<double>(T);
    }
    for (std::size_t q = 0; q < averaged.size(); ++q)
        CHECK(agg.probs[q] == doctest::Approx(averaged[q]).epsilon(1e-12));
}

TEST_CASE("zero attractiveness piles everything on the founder") {
    const ModelParams p(2, 0.0);
    const std::int64_t T = 100;
    const AggregateState s = propagate_aggregate_to(p, T);
    CHECK(s.probs[0] == doctest::Approx(99.0 / 100.0).epsilon(1e-12));
    CHECK(s.probs[200] == doctest::Approx(1.0 / 100.0).epsilon(1e-12));
}

TEST_CASE("first passage values") {
    const ModelParams p(1, 1.0);
    const FirstPassageTable t3 = first_passage(p, 2, 1, 3);
    CHECK(t3.f(1, 3) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(t3.f(1, 2) == 0.0);  // below the reachability floor
    CHECK(first_passage_floor(2, 1, p) == 3);

    CHECK_THROWS_AS(first_passage(p, 2, 0, 5), std::domain_error);
    CHECK_THROWS_AS(first_passage(p, 1, 1, 5), std::domain_error);  // founder born at q=m
}

TEST_CASE("first passage sums stay below one and match enumeration") {
    const ModelParams p(2, 1.0);
    const std::int64_t T = 6;
    const testing::BruteForceResult bf = testing::brute_force(p, T, {{3, 2}});
    const FirstPassageTable table = first_passage(p, 3, 2, T);
    for (std::int64_t s = 1; s <= T; ++s) {
        const auto it = bf.first_passage.find(s);
        const double expect = it == bf.first_passage.end() ? 0.0 : it->second;
        CHECK(table.f(2, s) == doctest::Approx(expect).epsilon(1e-14));
    }
    CHECK(table.sum_over_s(2) <= 1.0 + 1e-12);
}

TEST_CASE("representation identity: passage times plus survival reproduce P(q,i,t)") {
    CHECK(verify_passage_identity(ModelParams(1, 1.0), 2, 1, 3) <= 1e-15);
    CHECK(verify_passage_identity(ModelParams(2, 1.0), 3, 2, 8) <= 1e-12);
    // t = t0: the survival product is empty
    const ModelParams p(1, 1.0);
    CHECK(first_passage_floor(2, 2, p) == 4);
    CHECK(verify_passage_identity(p, 2, 2, 4) <= 1e-15);
}

TEST_CASE("convergence diagnostic tracks the steady-state value") {
    const ModelParams p(1, 1.0);
    const ConvergenceSeries series = convergence_diagnostic(p, 0, {10, 100, 1000});
    REQUIRE(series.points.size() == 3);

    const double limit = p_zero(p);
    CHECK(std::abs(series.points[2].p - limit) < std::abs(series.points[0].p - limit));
    CHECK(std::abs(series.points[2].t_delta_p) < std::abs(series.points[1].t_delta_p));
    CHECK(series.damping);

    const ConvergenceSeries empty = convergence_diagnostic(p, 400, {10, 20});
    for (const ConvergencePoint& pt : empty.points) {
        CHECK(pt.p == 0.0);
        CHECK(pt.t_delta_p == 0.0);
    }
}

TEST_CASE("truncation stays within budget and is reported, never renormalized") {
    const ModelParams p(1, 1.0);
    const PropagationOptions opt{1e-8, 1u << 23};
    const AggregateState s = propagate_aggregate_to(p, 2000, opt);
    CHECK(s.truncated_mass <= 1e-8);
    CHECK(s.truncated_mass > 0.0);
    CHECK(s.mass_sum() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(s.to_distribution().tail_mass == s.truncated_mass);
}

TEST_CASE("propagation guards") {
    const ModelParams p(1, 1.0);
    CHECK_THROWS_AS(propagate_aggregate(p, {3, 2}, {}), std::domain_error);
    CHECK_THROWS_AS(propagate_aggregate(p, {}, {}), std::domain_error);
    CHECK_THROWS_AS(propagate_aggregate(p, {5}, {1e-3, 1u << 23}), std::domain_error);
    CHECK_THROWS_AS(propagate_aggregate(p, {50}, {1e-12, 8}), numeric_error);
    CHECK_THROWS_AS(convergence_diagnostic(p, 0, {10}), std::domain_error);
}
