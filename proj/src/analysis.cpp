#include "dms/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

namespace dms {

namespace {

std::set<std::int64_t> union_support(const DegreeDistribution& p, const DegreeDistribution& r) {
    std::set<std::int64_t> qs;
    for (const auto& [q, m] : p.entries) qs.insert(q);
    for (const auto& [q, m] : r.entries) qs.insert(q);
    return qs;
}

}  // namespace

double total_variation(const DegreeDistribution& p, const DegreeDistribution& r) {
    double sum = std::abs(p.tail_mass - r.tail_mass);
    for (std::int64_t q : union_support(p, r)) sum += std::abs(p.mass(q) - r.mass(q));
    return 0.5 * sum;
}

double ks_discrete(const DegreeDistribution& p, const DegreeDistribution& r) {
    double cdf_p = 0.0, cdf_r = 0.0, sup = 0.0;
    for (std::int64_t q : union_support(p, r)) {
        cdf_p += p.mass(q);
        cdf_r += r.mass(q);
        sup = std::max(sup, std::abs(cdf_p - cdf_r));
    }
    return sup;
}

ChiSquareResult chi_square(const std::map<std::int64_t, double>& counts,
                           const DegreeDistribution& expected, double min_expected) {
    if (!(min_expected > 0.0))
        throw std::domain_error("chi_square: min_expected must be > 0");
    double n = 0.0;
    for (const auto& [q, c] : counts) {
        if (c < 0.0) throw std::domain_error("chi_square: negative count at q=" + std::to_string(q));
        n += c;
    }
    if (n < 1.0) throw std::domain_error("chi_square: needs at least one observation");

    std::set<std::int64_t> qs;
    for (const auto& [q, c] : counts) qs.insert(q);
    for (const auto& [q, m] : expected.entries) qs.insert(q);

    // Pool from the largest q inward; the expected tail mass seeds the top
    // accumulator so out-of-support observations have somewhere to land.
    std::vector<std::pair<double, double>> bins;  // (obs, exp)
    double acc_obs = 0.0;
    double acc_exp = n * expected.tail_mass;
    for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
        auto cit = counts.find(*it);
        acc_obs += cit == counts.end() ? 0.0 : cit->second;
        acc_exp += n * expected.mass(*it);
        if (acc_exp >= min_expected) {
            bins.emplace_back(acc_obs, acc_exp);
            acc_obs = 0.0;
            acc_exp = 0.0;
        }
    }
    if (acc_obs > 0.0 || acc_exp > 0.0) {
        if (bins.empty())
            bins.emplace_back(acc_obs, acc_exp);
        else {
            bins.back().first += acc_obs;
            bins.back().second += acc_exp;
        }
    }
    if (bins.size() < 2)
        throw std::domain_error("chi_square: fewer than 2 bins after pooling (min_expected=" +
                                std::to_string(min_expected) + ")");

    ChiSquareResult res;
    res.pooled_bins = static_cast<int>(bins.size());
    res.dof = res.pooled_bins - 1;
    for (const auto& [obs, exp] : bins) {
        const double diff = obs - exp;
        res.statistic += diff * diff / exp;
    }
    return res;
}

namespace {

struct LogLogFit {
    double slope, intercept, r_squared;
};

LogLogFit least_squares_loglog(const std::vector<std::pair<double, double>>& pts) {
    const double n = static_cast<double>(pts.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [x, y] : pts) {
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double ymean = sy / n;
    for (const auto& [x, y] : pts) {
        const double e = y - (intercept + slope * x);
        ss_res += e * e;
        ss_tot += (y - ymean) * (y - ymean);
    }
    return {slope, intercept, ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0};
}

// Mean of ln k under the discrete power law k^-gamma on [q_min, q_max].
double powerlaw_mean_log(double gamma, std::int64_t q_min, std::int64_t q_max) {
    double z = 0.0, zlog = 0.0;
    for (std::int64_t k = q_min; k <= q_max; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const double w = std::exp(-gamma * lk);
        z += w;
        zlog += lk * w;
    }
    return zlog / z;
}

}  // namespace

TailFit fit_tail(const DegreeDistribution& d, std::int64_t q_min, std::int64_t q_max,
                 TailFitMethod method) {
    if (q_min >= q_max) throw std::domain_error("fit_tail: need q_min < q_max");
    if (q_min < 1) throw std::domain_error("fit_tail: q_min must be >= 1");

    std::vector<std::pair<double, double>> pts;  // (ln q, ln p)
    double mass_in_range = 0.0, weighted_log = 0.0;
    for (auto it = d.entries.lower_bound(q_min); it != d.entries.end() && it->first <= q_max; ++it) {
        if (it->second <= 0.0) continue;
        const double lq = std::log(static_cast<double>(it->first));
        pts.emplace_back(lq, std::log(it->second));
        mass_in_range += it->second;
        weighted_log += it->second * lq;
    }
    if (pts.size() < 5)
        throw std::domain_error("fit_tail: fewer than 5 support points with positive mass in [" +
                                std::to_string(q_min) + ", " + std::to_string(q_max) + "]");

    TailFit fit;
    fit.q_min = q_min;
    fit.q_max = q_max;
    fit.method = method;

    if (method == TailFitMethod::loglog_ls) {
        const LogLogFit ls = least_squares_loglog(pts);
        fit.slope = ls.slope;
        fit.intercept = ls.intercept;
        fit.r_squared = ls.r_squared;
        return fit;
    }

    // discrete MLE: solve E_gamma[ln k] = observed mean of ln q by bisection
    // (the left side is strictly decreasing in gamma).
    const double target = weighted_log / mass_in_range;
    double lo = 1e-3, hi = 64.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (powerlaw_mean_log(mid, q_min, q_max) > target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo < 1e-12) break;
    }
    const double gamma = 0.5 * (lo + hi);
    fit.slope = -gamma;

    double z = 0.0;
    for (std::int64_t k = q_min; k <= q_max; ++k)
        z += std::pow(static_cast<double>(k), -gamma);
    fit.intercept = std::log(mass_in_range / z);

    double ss_res = 0, ss_tot = 0, ymean = 0;
    for (const auto& [x, y] : pts) ymean += y;
    ymean /= static_cast<double>(pts.size());
    for (const auto& [x, y] : pts) {
        const double e = y - (fit.intercept - gamma * x);
        ss_res += e * e;
        ss_tot += (y - ymean) * (y - ymean);
    }
    fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

ComparisonReport compare_report(const DegreeDistribution& left, const DegreeDistribution& right,
                                const std::string& left_label, const std::string& right_label,
                                std::optional<std::pair<std::int64_t, std::int64_t>> q_range,
                                const std::map<std::int64_t, double>* left_counts,
                                double pseudo_n) {
    std::int64_t qlo = 0;
    std::int64_t qhi = std::max(left.max_degree(), right.max_degree());
    if (q_range) {
        qlo = q_range->first;
        qhi = q_range->second;
        if (qlo > qhi) throw std::domain_error("compare_report: q_min > q_max");
    }

    const DegreeDistribution lr = restrict_range(left, qlo, qhi);
    const DegreeDistribution rr = restrict_range(right, qlo, qhi);

    ComparisonReport rep;
    rep.left_label = left_label;
    rep.right_label = right_label;
    rep.q_min = qlo;
    rep.q_max = qhi;
    rep.tv = total_variation(lr, rr);
    rep.ks = ks_discrete(lr, rr);

    // observed counts: real ones when supplied, otherwise mass-scaled pseudo
    // counts; out-of-range observations fold into a q_max+1 overflow entry
    // that the chi-square tail pooling absorbs.
    std::map<std::int64_t, double> counts;
    if (left_counts) {
        double overflow = 0.0;
        for (const auto& [q, c] : *left_counts) {
            if (q >= qlo && q <= qhi)
                counts[q] = c;
            else
                overflow += c;
        }
        if (overflow > 0.0) counts[qhi + 1] += overflow;
    } else {
        for (const auto& [q, m] : lr.entries) counts[q] = pseudo_n * m;
        if (lr.tail_mass > 0.0) counts[qhi + 1] = pseudo_n * lr.tail_mass;
    }

    try {
        rep.chi2 = chi_square(counts, rr);
    } catch (const std::domain_error& e) {
        rep.chi2 = ChiSquareResult{};
        rep.notes = std::string("chi-square unavailable: ") + e.what();
    }
    return rep;
}

}  // namespace dms
