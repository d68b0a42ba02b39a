#include "dms/distribution.hpp"

namespace dms {

DegreeDistribution restrict_range(const DegreeDistribution& d, std::int64_t q_min,
                                  std::int64_t q_max) {
    DegreeDistribution out;
    out.tail_mass = d.tail_mass;
    for (const auto& [q, p] : d.entries) {
        if (q >= q_min && q <= q_max)
            out.entries[q] = p;
        else
            out.tail_mass += p;
    }
    return out;
}

}  // namespace dms
