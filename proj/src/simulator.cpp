#include "dms/simulator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace dms {

std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t replica_seed(std::uint64_t seed, int replica) {
    std::uint64_t state = seed;
    std::uint64_t out = 0;
    for (int r = 0; r <= replica; ++r) out = splitmix64_next(state);
    return out;
}

namespace {

// 53-bit mantissa uniform in [0,1).
double uniform01(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

// Unbiased uniform draw in [0, bound) by rejection.
std::uint64_t draw_below(std::mt19937_64& gen, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
        const std::uint64_t x = gen();
        if (x >= threshold) return x % bound;
    }
}

}  // namespace

WeightIndex::WeightIndex(double A, std::size_t capacity_hint)
    : exact_(false), A_real_(A), tree_real_(capacity_hint) {
    if (!(A >= 0.0)) throw std::domain_error("WeightIndex: A must be >= 0");
}

WeightIndex::WeightIndex(const Rational& A, std::size_t capacity_hint)
    : exact_(true), A_real_(A.value()), A_rat_(A), tree_int_(capacity_hint) {
    if (A.den == 0) throw std::domain_error("WeightIndex: rational A has zero denominator");
}

void WeightIndex::append(std::int64_t q0) {
    if (q0 < 0) throw std::domain_error("WeightIndex::append: q0 must be >= 0");
    ++nodes_;
    if (exact_)
        tree_int_.push_back(A_rat_.num + static_cast<std::uint64_t>(q0) * A_rat_.den);
    else
        tree_real_.push_back(A_real_ + static_cast<double>(q0));
}

void WeightIndex::add_links(std::size_t node, int count) {
    if (node >= nodes_) throw std::domain_error("WeightIndex::add_links: node out of range");
    if (exact_)
        tree_int_.add(node + 1, static_cast<std::uint64_t>(count) * A_rat_.den);
    else
        tree_real_.add(node + 1, static_cast<double>(count));
}

double WeightIndex::total() const {
    if (exact_)
        return static_cast<double>(tree_int_.total()) / static_cast<double>(A_rat_.den);
    return tree_real_.total();
}

double WeightIndex::weight(std::size_t node) const {
    if (node >= nodes_) throw std::domain_error("WeightIndex::weight: node out of range");
    if (exact_)
        return static_cast<double>(tree_int_.value(node + 1)) / static_cast<double>(A_rat_.den);
    return tree_real_.value(node + 1);
}

std::uint64_t WeightIndex::total_scaled() const {
    if (!exact_) throw std::domain_error("WeightIndex::total_scaled: real-weight mode");
    return tree_int_.total();
}

std::size_t WeightIndex::sample(double u) const {
    if (nodes_ == 0 || !(total() > 0.0))
        throw std::domain_error("WeightIndex::sample: total weight is zero");
    if (exact_) {
        const double scaled = u * static_cast<double>(A_rat_.den);
        std::uint64_t target = scaled <= 0.0 ? 0 : static_cast<std::uint64_t>(scaled);
        const std::uint64_t tot = tree_int_.total();
        if (target >= tot) target = tot - 1;
        return tree_int_.find(target) - 1;
    }
    double v = u;
    const double tot = tree_real_.total();
    if (v >= tot) v = std::nextafter(tot, 0.0);
    if (v < 0.0) v = 0.0;
    return tree_real_.find(v) - 1;
}

std::size_t WeightIndex::sample(std::mt19937_64& gen) const {
    if (nodes_ == 0) throw std::domain_error("WeightIndex::sample: empty index");
    if (exact_) {
        const std::uint64_t tot = tree_int_.total();
        if (tot == 0) throw std::domain_error("WeightIndex::sample: total weight is zero");
        return tree_int_.find(draw_below(gen, tot)) - 1;
    }
    const double tot = tree_real_.total();
    if (!(tot > 0.0)) throw std::domain_error("WeightIndex::sample: total weight is zero");
    double u = uniform01(gen) * tot;
    if (u >= tot) u = std::nextafter(tot, 0.0);
    return tree_real_.find(u) - 1;
}

std::size_t sample_target(const WeightIndex& w, double u) { return w.sample(u); }

std::uint64_t SimulatedNetwork::in_degree_sum() const {
    std::uint64_t s = 0;
    for (std::uint32_t q : in_degree) s += q;
    return s;
}

namespace {

void validate(const GrowthConfig& c) {
    if (c.steps < 1) throw std::domain_error("grow: steps must be >= 1");
    if (c.replicas < 1) throw std::domain_error("grow: replicas must be >= 1");
    const std::int64_t max_degree = static_cast<std::int64_t>(c.params.m) * c.steps;
    if (max_degree > std::numeric_limits<std::uint32_t>::max())
        throw std::domain_error("grow: m*steps exceeds the 32-bit in-degree range");
    if (c.a_rational) {
        if (c.a_rational->den == 0)
            throw std::domain_error("grow: rational A has zero denominator");
        if (c.params.A != c.a_rational->value())
            throw std::domain_error("grow: params.A does not match the rational A");
    }
    if (c.track_node && (*c.track_node < 1 || *c.track_node > c.steps))
        throw std::domain_error("grow: track_node outside [1, steps]");
}

SimulatedNetwork grow_replica(const GrowthConfig& c, int replica) {
    validate(c);
    const ModelParams& p = c.params;
    const std::int64_t T = c.steps;

    WeightIndex index =
        c.a_rational ? WeightIndex(*c.a_rational, static_cast<std::size_t>(T))
                     : WeightIndex(p.A, static_cast<std::size_t>(T));

    SimulatedNetwork net;
    net.seed = replica_seed(c.seed, replica);
    net.in_degree.reserve(static_cast<std::size_t>(T));
    if (c.record_edges)
        net.edges.reserve(static_cast<std::size_t>(T - 1) * static_cast<std::size_t>(p.m));

    std::mt19937_64 gen(net.seed);

    // founder node: m in-links at t = 1
    net.in_degree.push_back(static_cast<std::uint32_t>(p.m));
    index.append(p.m);

    const std::size_t tracked =
        c.track_node ? static_cast<std::size_t>(*c.track_node - 1) : static_cast<std::size_t>(-1);
    std::vector<std::size_t> targets(static_cast<std::size_t>(p.m));

    for (std::int64_t t = 1; t < T; ++t) {
        // draws against the step-start weights; increments deferred
        for (int l = 0; l < p.m; ++l) targets[l] = index.sample(gen);

        int tracked_gain = 0;
        double tracked_weight = 0.0;
        if (tracked < net.in_degree.size()) tracked_weight = index.weight(tracked);

        for (int l = 0; l < p.m; ++l) {
            const std::size_t s = targets[l];
            ++net.in_degree[s];
            index.add_links(s, 1);
            if (s == tracked) ++tracked_gain;
            if (c.record_edges)
                net.edges.emplace_back(static_cast<std::uint32_t>(t + 1),
                                       static_cast<std::uint32_t>(s + 1));
        }
        if (tracked < net.in_degree.size())
            net.tracked.push_back({t, tracked_weight, tracked_gain});

        net.in_degree.push_back(0);
        index.append(0);
    }
    return net;
}

}  // namespace

SimulatedNetwork grow(const GrowthConfig& c) { return grow_replica(c, 0); }

DegreeDistribution degree_histogram(const SimulatedNetwork& n) {
    DegreeDistribution d;
    if (n.in_degree.empty()) return d;
    std::map<std::int64_t, std::int64_t> counts;
    for (std::uint32_t q : n.in_degree) ++counts[static_cast<std::int64_t>(q)];
    const double total = static_cast<double>(n.in_degree.size());
    for (const auto& [q, c] : counts) d.entries[q] = static_cast<double>(c) / total;
    return d;
}

ReplicateResult replicate(const GrowthConfig& c) {
    validate(c);
    ReplicateResult out;
    out.per_replica.reserve(static_cast<std::size_t>(c.replicas));
    for (int r = 0; r < c.replicas; ++r)
        out.per_replica.push_back(degree_histogram(grow_replica(c, r)));

    const double inv = 1.0 / static_cast<double>(c.replicas);
    for (const DegreeDistribution& d : out.per_replica)
        for (const auto& [q, mass] : d.entries) out.average.entries[q] += mass * inv;
    return out;
}

}  // namespace dms
