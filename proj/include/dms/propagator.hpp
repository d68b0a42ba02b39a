#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "dms/distribution.hpp"
#include "dms/model.hpp"

// Exact finite-time evolution of the network Markov chain.
//
// Per node i the in-degree follows the one-step kernel of model.hpp; the
// network distribution is the average P(q,t) = (1/t) sum_i P(q,i,t).  Because
// the kernel depends on (q,t) only and never on i, the average itself obeys
// the recursion
//   (t+1) P(q,t+1) = t * sum_{j=0}^{min(m,q)} B_j(q-j,t) P(q-j,t) + delta_{q0}
// where B_j(x,t) is the receive-count row and the delta term is the newborn
// node.  That gives an O(T Q m) aggregate path next to the O(T^2 Q m)
// per-node family needed for first-passage work; their agreement is asserted
// by tests, not assumed.

namespace dms {

// Network-average distribution at time t.  probs[q] is P(q,t); mass clipped
// by trailing-support truncation accumulates in truncated_mass and is never
// renormalized back in.
struct AggregateState {
    std::int64_t t = 1;
    std::vector<double> probs;
    double truncated_mass = 0.0;

    double mass_sum() const;
    DegreeDistribution to_distribution() const;
};

// Distribution of one node's in-degree: P(q,i,t).
struct PerNodeState {
    std::int64_t node = 1;   // birth time i
    std::int64_t t = 1;
    std::vector<double> probs;

    double mass_sum() const;
    DegreeDistribution to_distribution() const;
};

// First-passage probabilities f(q,i,s): node i's in-degree reaches q for the
// first time at step s.  Absent entries (in particular every s below the
// floor t0(q,i) = i + ceil((q - q_birth)/m)) read as zero.
struct FirstPassageTable {
    std::int64_t node = 1;
    std::map<std::pair<std::int64_t, std::int64_t>, double> rows;  // (q,s) -> f

    double f(std::int64_t q, std::int64_t s) const {
        auto it = rows.find({q, s});
        return it == rows.end() ? 0.0 : it->second;
    }
    double sum_over_s(std::int64_t q) const;
};

struct PropagationOptions {
    double eps = 1e-12;                 // trailing-mass truncation budget, <= 1e-6
    std::size_t max_support = 1u << 23; // guard against support blow-up
};

// Earliest time node i can hold in-degree q (q above the birth state).
std::int64_t first_passage_floor(std::int64_t i, std::int64_t q, const ModelParams& p);

// t = 1 network: the single founder node carries m in-links.
AggregateState init_aggregate(const ModelParams& p);

// One step of the aggregate recursion, t -> t+1.
AggregateState step_aggregate(const AggregateState& s, const ModelParams& p,
                              const PropagationOptions& opt = {});

// States at the requested (strictly increasing, >= 1) checkpoint times.
std::vector<AggregateState> propagate_aggregate(const ModelParams& p,
                                                const std::vector<std::int64_t>& checkpoints,
                                                const PropagationOptions& opt = {});
AggregateState propagate_aggregate_to(const ModelParams& p, std::int64_t T,
                                      const PropagationOptions& opt = {});

// Birth state of node i: {m:1} at t=1 for the founder, {0:1} at t=i otherwise.
PerNodeState init_per_node(const ModelParams& p, std::int64_t i);
PerNodeState step_per_node(const PerNodeState& s, const ModelParams& p);
PerNodeState propagate_per_node(const ModelParams& p, std::int64_t i, std::int64_t T);
std::vector<PerNodeState> per_node_trajectory(const ModelParams& p, std::int64_t i,
                                              const std::vector<std::int64_t>& checkpoints);

// f(q,i,s) for s = t0..T, computed alongside a streamed per-node propagation:
//   f(q,i,s) = sum_{j=1}^{min(m,q-q_birth)} B_j(q-j, s-1) P(q-j,i,s-1).
// q must lie strictly above the birth state (first passage to the birth
// state is the birth itself).
FirstPassageTable first_passage(const ModelParams& p, std::int64_t i, std::int64_t q,
                                std::int64_t T);

// |P(q,i,t) - sum_{s=t0}^{t} f(q,i,s) prod_{j=s}^{t-1} [1-(q+A)/((m+A)j)]^m|.
// The product is the probability the degree stays put after reaching q; the
// empty product (s = t) is 1.
double verify_passage_identity(const ModelParams& p, std::int64_t i, std::int64_t q,
                               std::int64_t t);

struct ConvergencePoint {
    std::int64_t t = 0;
    double p = 0.0;          // P(q,t)
    double t_delta_p = 0.0;  // t * (P(q,t+1) - P(q,t))
};

struct ConvergenceSeries {
    std::int64_t q = 0;
    std::vector<ConvergencePoint> points;
    bool damping = false;  // |t_delta_p| decreasing across the last three checkpoints
};

// P(q,t) and the damping diagnostic t*(P(q,t+1)-P(q,t)) at each checkpoint.
ConvergenceSeries convergence_diagnostic(const ModelParams& p, std::int64_t q,
                                         const std::vector<std::int64_t>& checkpoints,
                                         const PropagationOptions& opt = {});

}  // namespace dms
