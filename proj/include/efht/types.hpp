#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace efht {

using Vector = std::vector<double>;

/// A decision vector together with its cached objective vector.
struct Individual {
    Vector x;
    Vector f;

    bool operator==(const Individual&) const = default;
};

using Population = std::vector<Individual>;

/// Pareto dominance for minimization: a is no worse everywhere and strictly
/// better somewhere.
inline bool dominates(std::span<const double> a, std::span<const double> b) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] > b[k]) return false;
        if (a[k] < b[k]) strictly = true;
    }
    return strictly;
}

inline std::vector<Vector> objectives_of(const Population& pop) {
    std::vector<Vector> out;
    out.reserve(pop.size());
    for (const auto& ind : pop) out.push_back(ind.f);
    return out;
}

}  // namespace efht
