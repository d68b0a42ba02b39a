#pragma once

#include <map>
#include <cstdint>

// Sparse in-degree distribution, the exchange type between the simulator,
// the exact propagator, the closed forms and the analysis metrics.

namespace dms {

struct DegreeDistribution {
    std::map<std::int64_t, double> entries;  // q -> mass
    double tail_mass = 0.0;                  // mass beyond the stored support

    double mass(std::int64_t q) const {
        auto it = entries.find(q);
        return it == entries.end() ? 0.0 : it->second;
    }

    double entry_sum() const {
        double s = 0.0;
        for (const auto& [q, p] : entries) s += p;
        return s;
    }

    std::int64_t max_degree() const {
        return entries.empty() ? -1 : entries.rbegin()->first;
    }
};

// Entries in [q_min, q_max] kept as-is; everything else (including the
// original tail_mass) pooled into tail_mass.  Used to compare against a
// truncated reference without renormalizing.
DegreeDistribution restrict_range(const DegreeDistribution& d, std::int64_t q_min,
                                  std::int64_t q_max);

}  // namespace dms
