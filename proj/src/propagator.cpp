#include "dms/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "dms/errors.hpp"

namespace dms {

namespace {

// Applies the receive-count kernel to a dense degree distribution at time t:
// out[x+j] += B_j(x,t) * probs[x].  Shared by the aggregate and per-node
// paths; rows are generated in place to keep the loop allocation-free.
std::vector<double> kernel_step(const std::vector<double>& probs, std::int64_t t,
                                const ModelParams& p) {
    const int m = p.m;
    const double total = total_attractiveness(t, p);
    const std::vector<double> coeff = binomial_coefficients(m);

    std::vector<double> out(probs.size() + static_cast<std::size_t>(m), 0.0);
    std::vector<double> pow_pi(static_cast<std::size_t>(m) + 1);
    std::vector<double> pow_omi(static_cast<std::size_t>(m) + 1);
    pow_pi[0] = 1.0;
    pow_omi[0] = 1.0;

    for (std::size_t x = 0; x < probs.size(); ++x) {
        const double mass = probs[x];
        if (mass == 0.0) continue;
        const double pi = (static_cast<double>(x) + p.A) / total;
        const double omi = 1.0 - pi;
        for (int j = 1; j <= m; ++j) {
            pow_pi[j] = pow_pi[j - 1] * pi;
            pow_omi[j] = pow_omi[j - 1] * omi;
        }
        for (int j = 0; j <= m; ++j)
            out[x + static_cast<std::size_t>(j)] += coeff[j] * pow_pi[j] * pow_omi[m - j] * mass;
    }
    return out;
}

// Trailing-support truncation: drop high-q states as long as the cumulative
// clipped mass stays within the eps budget.  Exact zeros always go.
void truncate_support(std::vector<double>& probs, double& truncated, double eps) {
    std::size_t keep = probs.size();
    double trail = 0.0;
    while (keep > 1) {
        const double candidate = trail + probs[keep - 1];
        if (truncated + candidate > eps) break;
        trail = candidate;
        --keep;
    }
    truncated += trail;
    probs.resize(keep);
}

void check_options(const PropagationOptions& opt) {
    if (!(opt.eps >= 0.0) || opt.eps > 1e-6)
        throw std::domain_error("propagator: eps must lie in [0, 1e-6], got " +
                                std::to_string(opt.eps));
}

void check_checkpoints(const std::vector<std::int64_t>& checkpoints, std::int64_t floor) {
    if (checkpoints.empty())
        throw std::domain_error("propagator: checkpoint list is empty");
    std::int64_t prev = floor - 1;
    for (std::int64_t c : checkpoints) {
        if (c <= prev)
            throw std::domain_error("propagator: checkpoints must be strictly increasing and >= " +
                                    std::to_string(floor));
        prev = c;
    }
}

}  // namespace

double AggregateState::mass_sum() const {
    double s = truncated_mass;
    for (double v : probs) s += v;
    return s;
}

DegreeDistribution AggregateState::to_distribution() const {
    DegreeDistribution d;
    d.tail_mass = truncated_mass;
    for (std::size_t q = 0; q < probs.size(); ++q)
        if (probs[q] != 0.0) d.entries[static_cast<std::int64_t>(q)] = probs[q];
    return d;
}

double PerNodeState::mass_sum() const {
    double s = 0.0;
    for (double v : probs) s += v;
    return s;
}

DegreeDistribution PerNodeState::to_distribution() const {
    DegreeDistribution d;
    for (std::size_t q = 0; q < probs.size(); ++q)
        if (probs[q] != 0.0) d.entries[static_cast<std::int64_t>(q)] = probs[q];
    return d;
}

double FirstPassageTable::sum_over_s(std::int64_t q) const {
    double s = 0.0;
    for (const auto& [key, v] : rows)
        if (key.first == q) s += v;
    return s;
}

std::int64_t first_passage_floor(std::int64_t i, std::int64_t q, const ModelParams& p) {
    const std::int64_t birth = (i == 1) ? p.m : 0;
    const std::int64_t gap = q - birth;
    return i + (gap + p.m - 1) / p.m;  // i + ceil(gap/m)
}

AggregateState init_aggregate(const ModelParams& p) {
    AggregateState s;
    s.t = 1;
    s.probs.assign(static_cast<std::size_t>(p.m) + 1, 0.0);
    s.probs[static_cast<std::size_t>(p.m)] = 1.0;
    s.truncated_mass = 0.0;
    return s;
}

AggregateState step_aggregate(const AggregateState& s, const ModelParams& p,
                              const PropagationOptions& opt) {
    check_options(opt);
    if (s.t < 1) throw std::domain_error("step_aggregate: state time must be >= 1");

    const double t = static_cast<double>(s.t);
    AggregateState next;
    next.t = s.t + 1;
    next.probs = kernel_step(s.probs, s.t, p);

    // Existing nodes keep weight t/(t+1); the newborn enters at q = 0.  The
    // truncated mass belongs to existing nodes, so it dilutes the same way.
    const double shrink = t / (t + 1.0);
    for (double& v : next.probs) v *= shrink;
    next.probs[0] += 1.0 / (t + 1.0);
    next.truncated_mass = s.truncated_mass * shrink;

    truncate_support(next.probs, next.truncated_mass, opt.eps);
    if (next.probs.size() > opt.max_support)
        throw numeric_error("step_aggregate: support exceeded max_support=" +
                            std::to_string(opt.max_support) + " at q_max=" +
                            std::to_string(next.probs.size() - 1) + ", t=" +
                            std::to_string(next.t));

    const double drift = std::abs(next.mass_sum() - 1.0);
    if (drift > 1e-9)
        throw numeric_error("step_aggregate: mass balance violated at t=" +
                            std::to_string(next.t) + ", |sum-1|=" + std::to_string(drift));
    return next;
}

std::vector<AggregateState> propagate_aggregate(const ModelParams& p,
                                                const std::vector<std::int64_t>& checkpoints,
                                                const PropagationOptions& opt) {
    check_options(opt);
    check_checkpoints(checkpoints, 1);

    std::vector<AggregateState> out;
    out.reserve(checkpoints.size());
    AggregateState state = init_aggregate(p);
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size()) {
        if (state.t == checkpoints[next_cp]) {
            out.push_back(state);
            ++next_cp;
            continue;
        }
        state = step_aggregate(state, p, opt);
    }
    return out;
}

AggregateState propagate_aggregate_to(const ModelParams& p, std::int64_t T,
                                      const PropagationOptions& opt) {
    return propagate_aggregate(p, {T}, opt).back();
}

PerNodeState init_per_node(const ModelParams& p, std::int64_t i) {
    if (i < 1) throw std::domain_error("init_per_node: node index must be >= 1, got " +
                                       std::to_string(i));
    PerNodeState s;
    s.node = i;
    if (i == 1) {
        s.t = 1;
        s.probs.assign(static_cast<std::size_t>(p.m) + 1, 0.0);
        s.probs[static_cast<std::size_t>(p.m)] = 1.0;
    } else {
        s.t = i;
        s.probs.assign(1, 1.0);
    }
    return s;
}

PerNodeState step_per_node(const PerNodeState& s, const ModelParams& p) {
    PerNodeState next;
    next.node = s.node;
    next.t = s.t + 1;
    next.probs = kernel_step(s.probs, s.t, p);
    return next;
}

PerNodeState propagate_per_node(const ModelParams& p, std::int64_t i, std::int64_t T) {
    if (i < 1 || i > T)
        throw std::domain_error("propagate_per_node: need 1 <= i <= T, got i=" +
                                std::to_string(i) + ", T=" + std::to_string(T));
    PerNodeState s = init_per_node(p, i);
    while (s.t < T) s = step_per_node(s, p);
    return s;
}

std::vector<PerNodeState> per_node_trajectory(const ModelParams& p, std::int64_t i,
                                              const std::vector<std::int64_t>& checkpoints) {
    if (i < 1) throw std::domain_error("per_node_trajectory: node index must be >= 1");
    check_checkpoints(checkpoints, i == 1 ? 1 : i);

    std::vector<PerNodeState> out;
    out.reserve(checkpoints.size());
    PerNodeState s = init_per_node(p, i);
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size()) {
        if (s.t == checkpoints[next_cp]) {
            out.push_back(s);
            ++next_cp;
            continue;
        }
        s = step_per_node(s, p);
    }
    return out;
}

FirstPassageTable first_passage(const ModelParams& p, std::int64_t i, std::int64_t q,
                                std::int64_t T) {
    if (i < 1) throw std::domain_error("first_passage: node index must be >= 1");
    const std::int64_t birth = (i == 1) ? p.m : 0;
    if (q <= birth)
        throw std::domain_error("first_passage: q must exceed the birth state " +
                                std::to_string(birth) + " of node " + std::to_string(i) +
                                " (first passage to the birth state is the birth itself)");

    FirstPassageTable table;
    table.node = i;
    const std::int64_t t0 = first_passage_floor(i, q, p);
    if (T < t0) return table;

    const std::vector<double> coeff = binomial_coefficients(p.m);
    PerNodeState state = init_per_node(p, i);
    while (state.t < T) {
        const std::int64_t s = state.t + 1;
        double f = 0.0;
        if (s >= t0) {
            const double total = total_attractiveness(state.t, p);
            const std::int64_t jmax = std::min<std::int64_t>(p.m, q);
            for (std::int64_t j = 1; j <= jmax; ++j) {
                const std::int64_t src = q - j;
                if (src < 0 || src >= static_cast<std::int64_t>(state.probs.size())) continue;
                const double mass = state.probs[static_cast<std::size_t>(src)];
                if (mass == 0.0) continue;
                const double pi = (static_cast<double>(src) + p.A) / total;
                f += coeff[j] * std::pow(pi, static_cast<double>(j)) *
                     std::pow(1.0 - pi, static_cast<double>(p.m - j)) * mass;
            }
            table.rows[{q, s}] = f;
        }
        state = step_per_node(state, p);
    }
    return table;
}

double verify_passage_identity(const ModelParams& p, std::int64_t i, std::int64_t q,
                               std::int64_t t) {
    const std::int64_t t0 = first_passage_floor(i, q, p);
    if (t < t0)
        throw std::domain_error("verify_passage_identity: t=" + std::to_string(t) +
                                " is below the first-passage floor t0=" + std::to_string(t0));

    const FirstPassageTable table = first_passage(p, i, q, t);
    const PerNodeState state = propagate_per_node(p, i, t);
    const double direct = q < static_cast<std::int64_t>(state.probs.size())
                              ? state.probs[static_cast<std::size_t>(q)]
                              : 0.0;

    // Survival factors accumulated from s = t downward; empty product = 1.
    double rhs = 0.0;
    double surv = 1.0;
    for (std::int64_t s = t; s >= t0; --s) {
        rhs += table.f(q, s) * surv;
        if (s > t0) {
            const double pi = (static_cast<double>(q) + p.A) /
                              ((static_cast<double>(p.m) + p.A) * static_cast<double>(s - 1));
            surv *= std::pow(1.0 - pi, static_cast<double>(p.m));
        }
    }
    return std::abs(direct - rhs);
}

ConvergenceSeries convergence_diagnostic(const ModelParams& p, std::int64_t q,
                                         const std::vector<std::int64_t>& checkpoints,
                                         const PropagationOptions& opt) {
    if (q < 0) throw std::domain_error("convergence_diagnostic: q must be >= 0");
    check_checkpoints(checkpoints, 1);
    if (checkpoints.size() < 2)
        throw std::domain_error("convergence_diagnostic: need at least two checkpoints");

    ConvergenceSeries series;
    series.q = q;

    AggregateState state = init_aggregate(p);
    std::size_t next_cp = 0;
    while (next_cp < checkpoints.size()) {
        if (state.t == checkpoints[next_cp]) {
            const double p_t = q < static_cast<std::int64_t>(state.probs.size())
                                   ? state.probs[static_cast<std::size_t>(q)]
                                   : 0.0;
            AggregateState peek = step_aggregate(state, p, opt);
            const double p_t1 = q < static_cast<std::int64_t>(peek.probs.size())
                                    ? peek.probs[static_cast<std::size_t>(q)]
                                    : 0.0;
            series.points.push_back(
                {state.t, p_t, static_cast<double>(state.t) * (p_t1 - p_t)});
            state = std::move(peek);
            ++next_cp;
            continue;
        }
        state = step_aggregate(state, p, opt);
    }

    const std::size_t n = series.points.size();
    const std::size_t window = std::min<std::size_t>(3, n);
    series.damping = n >= 2;
    for (std::size_t k = n - window + 1; k < n; ++k)
        if (!(std::abs(series.points[k].t_delta_p) < std::abs(series.points[k - 1].t_delta_p)))
            series.damping = false;
    return series;
}

}  // namespace dms
