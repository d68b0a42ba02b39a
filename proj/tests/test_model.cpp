#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "dms/model.hpp"

using namespace dms;

TEST_CASE("model params validate and derive a") {
    ModelParams p(2, 1.0);
    CHECK(p.a() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK_THROWS_AS(ModelParams(0, 1.0), std::domain_error);
    CHECK_THROWS_AS(ModelParams(1, -0.5), std::domain_error);
    CHECK_NOTHROW(ModelParams(1, 0.0));  // A = 0 allowed here
}

TEST_CASE("link probability matches the attachment rule") {
    CHECK(link_probability(1, 1, ModelParams(1, 1.0)) == 1.0);
    CHECK(link_probability(3, 5, ModelParams(2, 1.0)) == doctest::Approx(4.0 / 15.0).epsilon(1e-15));
    CHECK(link_probability(0, 10, ModelParams(2, 0.0)) == 0.0);
}

TEST_CASE("link probability rejects out-of-range states") {
    const ModelParams p(1, 1.0);
    CHECK_THROWS_AS(link_probability(1, 0, p), std::domain_error);
    CHECK_THROWS_AS(link_probability(-1, 1, p), std::domain_error);
    // q + A > (m + A) t
    CHECK_THROWS_WITH_AS(link_probability(3, 1, p), doctest::Contains("exceeds"),
                         std::domain_error);
}

TEST_CASE("transition row reproduces hand-computed binomials") {
    const TransitionRow r = transition_row(3, 5, ModelParams(2, 1.0));
    REQUIRE(r.probs.size() == 3);
    CHECK(r.probs[0] == doctest::Approx(121.0 / 225.0).epsilon(1e-14));
    CHECK(r.probs[1] == doctest::Approx(88.0 / 225.0).epsilon(1e-14));
    CHECK(r.probs[2] == doctest::Approx(16.0 / 225.0).epsilon(1e-14));

    const TransitionRow zero = transition_row(0, 10, ModelParams(2, 0.0));
    CHECK(zero.probs[0] == 1.0);
    CHECK(zero.probs[1] == 0.0);
    CHECK(zero.probs[2] == 0.0);

    // founder at t = 1 gains with certainty
    const TransitionRow sure = transition_row(1, 1, ModelParams(1, 1.0));
    CHECK(sure.probs[0] == 0.0);
    CHECK(sure.probs[1] == 1.0);
}

TEST_CASE("total attractiveness") {
    CHECK(total_attractiveness(1, ModelParams(1, 1.0)) == 2.0);
    CHECK(total_attractiveness(5, ModelParams(2, 1.0)) == 15.0);
    CHECK(total_attractiveness(100, ModelParams(3, 0.5)) == 350.0);
    CHECK_THROWS_AS(total_attractiveness(0, ModelParams(1, 1.0)), std::domain_error);
}

TEST_CASE("transition rows are stochastic over a random parameter sweep") {
    std::mt19937_64 gen(7);
    for (int trial = 0; trial < 500; ++trial) {
        const int m = 1 + static_cast<int>(gen() % 8);
        const double A = static_cast<double>(gen() % 100) / 16.0;
        const std::int64_t t = 1 + static_cast<std::int64_t>(gen() % 1000);
        const std::int64_t q_cap = static_cast<std::int64_t>((m + A) * t - A);
        const std::int64_t q = static_cast<std::int64_t>(gen() % (q_cap + 1));
        const TransitionRow r = transition_row(q, t, ModelParams(m, A));

        double sum = 0.0;
        for (double v : r.probs) {
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("transition row agrees with direct binomial evaluation, monotone past the mode") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = 1 + static_cast<int>(gen() % 10);
        const std::int64_t t = 2 + static_cast<std::int64_t>(gen() % 50);
        const std::int64_t q = static_cast<std::int64_t>(gen() % (m * t / 2 + 1));
        const ModelParams p(m, 1.0);
        const double pi = link_probability(q, t, p);
        const TransitionRow r = transition_row(q, t, p);

        // direct evaluation via lgamma
        for (int j = 0; j <= m; ++j) {
            const double direct = std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) -
                                           std::lgamma(m - j + 1.0)) *
                                  std::pow(pi, j) * std::pow(1.0 - pi, m - j);
            CHECK(r.probs[j] == doctest::Approx(direct).epsilon(1e-12));
        }

        // binomial pmf is nonincreasing past its mode floor((m+1)pi); in
        // particular the whole row is nonincreasing once pi < 1/(m+1)
        const int mode = static_cast<int>(std::floor((m + 1) * pi));
        for (int j = std::max(mode, 0); j + 1 <= m; ++j)
            CHECK(r.probs[j + 1] <= r.probs[j] + 1e-15);
    }
}

TEST_CASE("binomial coefficients by recurrence") {
    const std::vector<double> c = binomial_coefficients(5);
    CHECK(c == std::vector<double>{1, 5, 10, 10, 5, 1});
}
