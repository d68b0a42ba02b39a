#include "dms/model.hpp"

#include <sstream>
#include <stdexcept>

namespace dms {

ModelParams::ModelParams(int m_, double A_) : m(m_), A(A_) {
    if (m < 1)
        throw std::domain_error("ModelParams: m must be >= 1, got m=" + std::to_string(m));
    if (!(A >= 0.0))
        throw std::domain_error("ModelParams: A must be >= 0, got A=" + std::to_string(A));
}

std::vector<double> binomial_coefficients(int m) {
    std::vector<double> c(static_cast<std::size_t>(m) + 1);
    c[0] = 1.0;
    for (int j = 1; j <= m; ++j)
        c[j] = c[j - 1] * static_cast<double>(m - j + 1) / static_cast<double>(j);
    return c;
}

double link_probability(std::int64_t q, std::int64_t t, const ModelParams& p) {
    if (t < 1) {
        std::ostringstream msg;
        msg << "link_probability: t must be >= 1, got t=" << t;
        throw std::domain_error(msg.str());
    }
    if (q < 0) {
        std::ostringstream msg;
        msg << "link_probability: q must be >= 0, got q=" << q;
        throw std::domain_error(msg.str());
    }
    const double weight = static_cast<double>(q) + p.A;
    const double total = total_attractiveness(t, p);
    if (weight > total) {
        std::ostringstream msg;
        msg << "link_probability: q + A = " << weight << " exceeds (m+A)*t = " << total
            << " (q=" << q << ", t=" << t << ", m=" << p.m << ", A=" << p.A << ")";
        throw std::domain_error(msg.str());
    }
    return weight / total;
}

TransitionRow transition_row(std::int64_t q, std::int64_t t, const ModelParams& p) {
    const double pi = link_probability(q, t, p);
    const double omi = 1.0 - pi;

    TransitionRow row;
    row.q = q;
    row.t = t;
    row.probs.resize(static_cast<std::size_t>(p.m) + 1);

    // C(m,j) pi^j (1-pi)^(m-j), powers built incrementally.  The degenerate
    // rows pi = 0 and pi = 1 fall out exactly (0^0 = 1 by the loop seeds).
    const std::vector<double> coeff = binomial_coefficients(p.m);
    std::vector<double> pow_pi(static_cast<std::size_t>(p.m) + 1);
    std::vector<double> pow_omi(static_cast<std::size_t>(p.m) + 1);
    pow_pi[0] = 1.0;
    pow_omi[0] = 1.0;
    for (int j = 1; j <= p.m; ++j) {
        pow_pi[j] = pow_pi[j - 1] * pi;
        pow_omi[j] = pow_omi[j - 1] * omi;
    }
    for (int j = 0; j <= p.m; ++j)
        row.probs[j] = coeff[j] * pow_pi[j] * pow_omi[p.m - j];
    return row;
}

double total_attractiveness(std::int64_t t, const ModelParams& p) {
    if (t < 1)
        throw std::domain_error("total_attractiveness: t must be >= 1, got t=" + std::to_string(t));
    return (static_cast<double>(p.m) + p.A) * static_cast<double>(t);
}

}  // namespace dms
