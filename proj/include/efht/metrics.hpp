#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "efht/problems.hpp"
#include "efht/types.hpp"

namespace efht {

namespace detail {

inline double squared_distance(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double d = a[k] - b[k];
        s += d * d;
    }
    return s;
}

inline void check_objective_count(const std::vector<Vector>& solutions, const ReferenceFront& ref) {
    if (ref.points.empty()) throw std::invalid_argument("igd: empty reference set");
    const std::size_t m = ref.objectives();
    for (const auto& s : solutions)
        if (s.size() != m)
            throw std::invalid_argument("igd: objective-count mismatch (" + std::to_string(s.size()) + " vs " +
                                        std::to_string(m) + ")");
}

}  // namespace detail

/// Squared distance from every reference point to its nearest solution.
/// Lets the IGD of a union be computed incrementally: see igd_with_base.
inline std::vector<double> nearest_squared_distances(const std::vector<Vector>& solutions, const ReferenceFront& ref) {
    detail::check_objective_count(solutions, ref);
    std::vector<double> best(ref.size(), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < ref.size(); ++i) {
        const auto& v = ref.points[i];
        double b = best[i];
        for (const auto& u : solutions) b = std::min(b, detail::squared_distance(v, u));
        best[i] = b;
    }
    return best;
}

inline double igd_from_squared(const std::vector<double>& nearest_sq) {
    double sum = 0.0;
    for (double d : nearest_sq) sum += std::sqrt(d);
    return sum / static_cast<double>(nearest_sq.size());
}

/// Inverted generational distance: mean over reference points of the
/// Euclidean distance to the nearest solution, in raw objective space.
inline double igd(const std::vector<Vector>& solutions, const ReferenceFront& ref) {
    if (solutions.empty()) throw std::invalid_argument("igd: empty solution set");
    return igd_from_squared(nearest_squared_distances(solutions, ref));
}

/// IGD of (base ∪ extra), given nearest_squared_distances(base, ref).
/// Bitwise identical to igd() on the concatenated set.
inline double igd_with_base(const std::vector<double>& base_nearest_sq, const std::vector<Vector>& extra,
                            const ReferenceFront& ref) {
    detail::check_objective_count(extra, ref);
    double sum = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        double b = base_nearest_sq[i];
        for (const auto& u : extra) b = std::min(b, detail::squared_distance(ref.points[i], u));
        sum += std::sqrt(b);
    }
    return sum / static_cast<double>(ref.size());
}

/// Best-so-far IGD process psi_t.
struct IgdTracker {
    double best_so_far = std::numeric_limits<double>::infinity();
    long generation = -1;  // -1 until the first value is recorded

    bool started() const { return generation >= 0; }
};

inline IgdTracker update_best(IgdTracker tracker, double igd_value) {
    if (!(igd_value >= 0.0)) throw std::invalid_argument("update_best: IGD value must be nonnegative");
    tracker.best_so_far = std::min(tracker.best_so_far, igd_value);
    ++tracker.generation;
    return tracker;
}

/// One-step IGD gain psi_t - psi_{t+1}.
inline double igd_gain(double psi_t, double psi_next) {
    if (psi_next > psi_t)
        throw std::logic_error("igd_gain: psi increased (" + std::to_string(psi_t) + " -> " + std::to_string(psi_next) +
                               "); best-so-far tracking was bypassed");
    return psi_t - psi_next;
}

}  // namespace efht
