#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "dms/distribution.hpp"
#include "dms/fenwick.hpp"
#include "dms/model.hpp"

// Monte Carlo growth of model networks at the 1e6+ node scale.  Weighted
// target selection runs through a prefix-sum tree over per-node weights
// A + q_s, O(log n) per draw.
//
// Step semantics, the one decision everything downstream depends on: all m
// link targets of a step are drawn against the weights as of the step start,
// and the increments are applied only after the last draw.  That makes a
// node's per-step link gain exactly Binomial(m, w/((m+A)t)) conditioned on
// its start-of-step weight w.  Sequential updating within the step would be
// a different model.

namespace dms {

struct Rational {
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// splitmix64 stream; also the replica seed derivation.
std::uint64_t splitmix64_next(std::uint64_t& state);
std::uint64_t replica_seed(std::uint64_t seed, int replica);

// Per-node weights A + q_s behind a prefix-sum tree.  Real mode stores
// doubles; the exact mode (A given as a ratio of small integers) scales all
// weights by the denominator and keeps the tree in 64-bit integers, so the
// running total stays exact.
class WeightIndex {
public:
    explicit WeightIndex(double A, std::size_t capacity_hint = 0);
    explicit WeightIndex(const Rational& A, std::size_t capacity_hint = 0);

    void append(std::int64_t q0 = 0);               // new node with q0 in-links
    void add_links(std::size_t node, int count);    // node is 0-based

    std::size_t size() const { return nodes_; }
    bool exact() const { return exact_; }
    double total() const;
    double weight(std::size_t node) const;
    std::uint64_t total_scaled() const;             // exact mode only

    // Node whose weight interval contains u, for u in [0, total()).
    std::size_t sample(double u) const;
    // Mode-appropriate random draw (integer draws in exact mode).
    std::size_t sample(std::mt19937_64& gen) const;

private:
    bool exact_ = false;
    double A_real_ = 0.0;
    Rational A_rat_;
    std::size_t nodes_ = 0;
    FenwickTree<double> tree_real_;
    FenwickTree<std::uint64_t> tree_int_;
};

struct GrowthConfig {
    ModelParams params;
    std::int64_t steps = 1;                   // final node count T
    std::uint64_t seed = 0;
    bool record_edges = false;
    int replicas = 1;
    std::optional<Rational> a_rational;       // enables the exact-weight mode
    std::optional<std::int64_t> track_node;   // record per-step gains of this node (1-based)
};

struct TrackedGain {
    std::int64_t t = 0;      // time at step start
    double weight = 0.0;     // node weight at step start
    int gain = 0;            // links received this step
};

struct SimulatedNetwork {
    std::vector<std::uint32_t> in_degree;                       // index 0 = node born at t=1
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edges; // (source_step, target), 1-based
    std::vector<TrackedGain> tracked;
    std::uint64_t seed = 0;

    std::int64_t node_count() const { return static_cast<std::int64_t>(in_degree.size()); }
    std::uint64_t in_degree_sum() const;
};

// Grows a T-node network (replica index 0 of the seed stream).
SimulatedNetwork grow(const GrowthConfig& c);

// Free-standing interval lookup, same contract as WeightIndex::sample(u).
std::size_t sample_target(const WeightIndex& w, double u);

DegreeDistribution degree_histogram(const SimulatedNetwork& n);

struct ReplicateResult {
    DegreeDistribution average;
    std::vector<DegreeDistribution> per_replica;
};

// R independent replicas; replica r is seeded with the (r+1)-th output of a
// splitmix64 stream started at the configured seed, so reruns are
// bit-identical and replicas never share state.
ReplicateResult replicate(const GrowthConfig& c);

}  // namespace dms
