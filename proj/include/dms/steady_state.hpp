#pragma once

#include "dms/distribution.hpp"
#include "dms/model.hpp"

// Closed-form steady-state degree distribution of the model:
//   P(0)   = (m+A) / (m+A+mA)
//   P(q)   = m(q+A-1) / (m(q+A+1)+A) * P(q-1)
//   P(q)   = ((m+A)/m) * Gamma(A+A/m+1)/Gamma(A) * Gamma(q+A)/Gamma(q+A+2+A/m)
//   P(q)   ~ C q^-(2+A/m)  for large q
// plus the stationarity balance used as a test oracle.  The recurrence is
// the preferred route for whole distributions (ratios of small terms, no
// cancellation); the gamma form serves point queries at large q.

namespace dms {

// Steady-state probability of in-degree zero.  Degenerates to 1 at A = 0
// (isolated nodes then have zero weight and stay isolated forever).
double p_zero(const ModelParams& p) noexcept;
bool p_zero_degenerate(const ModelParams& p) noexcept;

// Entries for q = 0..q_max via the ratio recurrence seeded at p_zero;
// tail_mass is the remainder 1 - partial sum, never renormalized away.
// Requires A > 0.
DegreeDistribution steady_recurrence(const ModelParams& p, std::int64_t q_max);

// Gamma-function form, evaluated through log-gamma differences so q up to
// 1e6 stays far from overflow.  Requires A > 0.
double steady_gamma(const ModelParams& p, std::int64_t q);

// A = m special case: P(q) = 2m(m+1) / ((q+m)(q+m+1)(q+m+2)).
double steady_ba_special(int m, std::int64_t q);

// Power-law tail exponent 2 + A/m.
double tail_exponent(const ModelParams& p);

// Left minus right side of the stationarity balance
//   (1+a)P(q) + (q+ma)P(q) - (q-1+ma)P(q-1) = (1+a)delta_{q0}
// with P(-1) := 0 and missing entries read as 0.  Vanishes (1e-12 scale)
// exactly when d is the steady state.
double stationarity_residual(const DegreeDistribution& d, const ModelParams& p,
                             std::int64_t q);

}  // namespace dms
