#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include "dms/distribution.hpp"

// Distances between degree distributions, power-law tail fitting, and the
// comparison reports tying simulator, propagator and closed forms together.

namespace dms {

// (1/2) sum_q |p_q - r_q| over the union support, plus |delta tail|/2.
double total_variation(const DegreeDistribution& p, const DegreeDistribution& r);

// sup_q |CDF_p - CDF_r|.
double ks_discrete(const DegreeDistribution& p, const DegreeDistribution& r);

struct ChiSquareResult {
    double statistic = 0.0;
    int dof = 0;
    int pooled_bins = 0;
};

// Goodness of fit of observed counts against expected masses.  Bins are
// pooled from the largest q inward until every pooled bin carries expected
// count >= min_expected; the expected tail_mass seeds the topmost pooled
// bin.  Counts may be real-valued (replica averages, mass-scaled pseudo
// counts); integer counts are the usual case.
ChiSquareResult chi_square(const std::map<std::int64_t, double>& counts,
                           const DegreeDistribution& expected, double min_expected = 5.0);

enum class TailFitMethod { loglog_ls, discrete_mle };

struct TailFit {
    double slope = 0.0;      // fitted exponent of p ~ C q^slope (negative)
    double intercept = 0.0;  // log C of the loglog regression
    std::int64_t q_min = 0;
    std::int64_t q_max = 0;
    double r_squared = 0.0;
    TailFitMethod method = TailFitMethod::loglog_ls;
};

// Power-law exponent over support points with positive mass in
// [q_min, q_max]; needs at least 5 of them.
//   loglog_ls:    least-squares slope of log p against log q.
//   discrete_mle: maximum-likelihood exponent of a discrete power law
//                 truncated to [q_min, q_max], masses as weights.
TailFit fit_tail(const DegreeDistribution& d, std::int64_t q_min, std::int64_t q_max,
                 TailFitMethod method);

struct ComparisonReport {
    std::string left_label;
    std::string right_label;
    double tv = 0.0;
    ChiSquareResult chi2;
    double ks = 0.0;
    std::int64_t q_min = 0;
    std::int64_t q_max = 0;
    std::string notes;
};

// All three metrics with both sides coarsened to [q_min, q_max] (out-of-range
// mass pooled into the tails).  Chi-square observations come from
// left_counts when given, else from the left masses scaled to pseudo_n
// pseudo-observations, which keeps identical inputs at statistic zero.
ComparisonReport compare_report(const DegreeDistribution& left, const DegreeDistribution& right,
                                const std::string& left_label, const std::string& right_label,
                                std::optional<std::pair<std::int64_t, std::int64_t>> q_range = {},
                                const std::map<std::int64_t, double>* left_counts = nullptr,
                                double pseudo_n = 1e6);

}  // namespace dms
