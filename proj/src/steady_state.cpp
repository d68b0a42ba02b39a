#include "dms/steady_state.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dms {

namespace {

void require_positive_A(const ModelParams& p, const char* where) {
    if (!(p.A > 0.0))
        throw std::domain_error(std::string(where) +
                                ": requires A > 0 (Gamma(A) diverges and P(0) degenerates to 1 at A = 0), got A=" +
                                std::to_string(p.A));
}

}  // namespace

double p_zero(const ModelParams& p) noexcept {
    const double m = static_cast<double>(p.m);
    return (m + p.A) / (m + p.A + m * p.A);
}

bool p_zero_degenerate(const ModelParams& p) noexcept { return p.A == 0.0; }

DegreeDistribution steady_recurrence(const ModelParams& p, std::int64_t q_max) {
    require_positive_A(p, "steady_recurrence");
    if (q_max < 0)
        throw std::domain_error("steady_recurrence: q_max must be >= 0, got " +
                                std::to_string(q_max));

    const double m = static_cast<double>(p.m);
    DegreeDistribution d;
    double mass = p_zero(p);
    double sum = mass;
    d.entries[0] = mass;
    for (std::int64_t q = 1; q <= q_max; ++q) {
        const double qd = static_cast<double>(q);
        mass *= m * (qd + p.A - 1.0) / (m * (qd + p.A + 1.0) + p.A);
        d.entries[q] = mass;
        sum += mass;
    }
    d.tail_mass = 1.0 - sum;
    return d;
}

namespace {

// Stirling tail S(x) with ln Gamma(x) = (x-1/2)ln x - x + ln(2pi)/2 + S(x).
double stirling_tail(double x) {
    const double r = 1.0 / (x * x);
    return (1.0 / 12.0 - (1.0 / 360.0 - (1.0 / 1260.0 - r / 1680.0) * r) * r) / x;
}

// ln Gamma(x+d) - ln Gamma(x) without the big-minus-big cancellation that a
// raw lgamma difference suffers from at large x (relative error there grows
// like eps * x ln x, which breaks the 1e-12 agreement contracts at q ~ 1e4).
double lgamma_diff(double x, double d) {
    if (x < 50.0) return std::lgamma(x + d) - std::lgamma(x);
    return (x - 0.5) * std::log1p(d / x) + d * std::log(x + d) - d +
           stirling_tail(x + d) - stirling_tail(x);
}

}  // namespace

double steady_gamma(const ModelParams& p, std::int64_t q) {
    require_positive_A(p, "steady_gamma");
    if (q < 0) throw std::domain_error("steady_gamma: q must be >= 0, got " + std::to_string(q));

    const double m = static_cast<double>(p.m);
    const double a = p.a();
    const double qd = static_cast<double>(q);
    const double log_p = std::log((m + p.A) / m)
                       + std::lgamma(p.A + a + 1.0) - std::lgamma(p.A)
                       - lgamma_diff(qd + p.A, 2.0 + a);
    return std::exp(log_p);
}

double steady_ba_special(int m, std::int64_t q) {
    if (m < 1) throw std::domain_error("steady_ba_special: m must be >= 1");
    if (q < 0) throw std::domain_error("steady_ba_special: q must be >= 0");
    const double md = static_cast<double>(m);
    const double qm = static_cast<double>(q) + md;
    return 2.0 * md * (md + 1.0) / (qm * (qm + 1.0) * (qm + 2.0));
}

double tail_exponent(const ModelParams& p) { return 2.0 + p.a(); }

double stationarity_residual(const DegreeDistribution& d, const ModelParams& p,
                             std::int64_t q) {
    const double a = p.a();
    const double ma = static_cast<double>(p.m) * a;  // equals A
    const double qd = static_cast<double>(q);
    const double pq = d.mass(q);
    const double pq1 = q >= 1 ? d.mass(q - 1) : 0.0;
    const double lhs = (1.0 + a) * pq + (qd + ma) * pq - (qd - 1.0 + ma) * pq1;
    const double rhs = q == 0 ? (1.0 + a) : 0.0;
    return lhs - rhs;
}

}  // namespace dms
