#pragma once

#include <cstdint>
#include <vector>

// Core objects of the attractiveness growth model: one node joins per step,
// m directed links are injected, and a link lands on node s with probability
// (A + q_s) / ((m + A) t), where q_s is the node's current in-degree.
// Everything else in the toolkit (exact propagation, closed forms, Monte
// Carlo) consumes the kernel defined here.

namespace dms {

struct ModelParams {
    int m = 1;        // links injected per step, >= 1
    double A = 1.0;   // initial attractiveness, >= 0

    ModelParams() = default;
    ModelParams(int m_, double A_);

    // a = A/m, recomputed on demand so it can never go stale.
    double a() const { return A / m; }
};

// One-step law of a node's in-degree: probs[j] is the probability of gaining
// exactly j of the m injected links this step.
struct TransitionRow {
    std::int64_t q = 0;
    std::int64_t t = 1;
    std::vector<double> probs;   // size m+1, sums to 1
};

// Probability that a single injected link lands on a node of in-degree q at
// time t: (q + A) / ((m + A) t).
double link_probability(std::int64_t q, std::int64_t t, const ModelParams& p);

// Binomial receive-count law: entry j = C(m,j) pi^j (1-pi)^(m-j) with
// pi = link_probability(q, t, p).
TransitionRow transition_row(std::int64_t q, std::int64_t t, const ModelParams& p);

// Total weight over the t live nodes: (m + A) t.
double total_attractiveness(std::int64_t t, const ModelParams& p);

// C(m, j) for j = 0..m by the multiplicative recurrence; m is small.
std::vector<double> binomial_coefficients(int m);

}  // namespace dms
