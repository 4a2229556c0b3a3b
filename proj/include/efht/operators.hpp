#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "efht/rng.hpp"
#include "efht/types.hpp"

namespace efht {

/// Real-coded variation parameters. pm < 0 means "1/n".
struct OperatorParams {
    double pc = 1.0;
    double eta_c = 20.0;
    double pm = -1.0;
    double eta_m = 20.0;

    double mutation_rate(std::size_t n) const { return pm < 0.0 ? 1.0 / static_cast<double>(n) : pm; }
};

inline void clamp_to_bounds(Vector& x, const Vector& lower, const Vector& upper) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
}

/// Simulated binary crossover in the per-variable form used by PlatEMO:
/// each variable crosses with probability 1/2, the spread factor gets a random
/// sign, and the whole pair is skipped with probability 1 - pc.
inline std::pair<Vector, Vector> sbx_crossover(const Vector& p1, const Vector& p2, double eta_c, double pc,
                                               const Vector& lower, const Vector& upper, Rng& rng) {
    Vector c1 = p1;
    Vector c2 = p2;
    const bool cross_pair = rng.uniform() < pc;
    if (!cross_pair) return {std::move(c1), std::move(c2)};

    for (std::size_t j = 0; j < p1.size(); ++j) {
        const double mu = rng.uniform();
        double beta = mu <= 0.5 ? std::pow(2.0 * mu, 1.0 / (eta_c + 1.0))
                                : std::pow(2.0 - 2.0 * mu, -1.0 / (eta_c + 1.0));
        if (rng.coin()) beta = -beta;
        if (rng.uniform() < 0.5) continue;  // variable left untouched
        const double mean = 0.5 * (p1[j] + p2[j]);
        const double half = 0.5 * (p1[j] - p2[j]);
        c1[j] = mean + beta * half;
        c2[j] = mean - beta * half;
    }
    clamp_to_bounds(c1, lower, upper);
    clamp_to_bounds(c2, lower, upper);
    return {std::move(c1), std::move(c2)};
}

/// Bounded polynomial mutation; each coordinate mutates with probability pm.
inline Vector polynomial_mutation(Vector x, double eta_m, double pm, const Vector& lower, const Vector& upper,
                                  Rng& rng) {
    const double power = 1.0 / (eta_m + 1.0);
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!(rng.uniform() < pm)) continue;
        const double mu = rng.uniform();
        const double span = upper[j] - lower[j];
        if (span <= 0.0) continue;
        double delta;
        if (mu <= 0.5) {
            const double d1 = (x[j] - lower[j]) / span;
            delta = std::pow(2.0 * mu + (1.0 - 2.0 * mu) * std::pow(1.0 - d1, eta_m + 1.0), power) - 1.0;
        } else {
            const double d2 = (upper[j] - x[j]) / span;
            delta = 1.0 - std::pow(2.0 * (1.0 - mu) + 2.0 * (mu - 0.5) * std::pow(1.0 - d2, eta_m + 1.0), power);
        }
        x[j] = std::clamp(x[j] + delta * span, lower[j], upper[j]);
    }
    return x;
}

/// Fast non-dominated sorting. Returns fronts as index lists; front 0 is the
/// non-dominated set.
inline std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Vector>& objectives) {
    const std::size_t n = objectives.size();
    std::vector<std::vector<std::size_t>> dominated_by_me(n);
    std::vector<std::size_t> domination_count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);

    for (std::size_t p = 0; p < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
            if (dominates(objectives[p], objectives[q])) {
                dominated_by_me[p].push_back(q);
                ++domination_count[q];
            } else if (dominates(objectives[q], objectives[p])) {
                dominated_by_me[q].push_back(p);
                ++domination_count[p];
            }
        }
    }
    for (std::size_t p = 0; p < n; ++p)
        if (domination_count[p] == 0) fronts[0].push_back(p);

    for (std::size_t k = 0; !fronts[k].empty(); ++k) {
        std::vector<std::size_t> next;
        for (auto p : fronts[k])
            for (auto q : dominated_by_me[p])
                if (--domination_count[q] == 0) next.push_back(q);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

/// Per-point rank (front index) for the given fronts.
inline std::vector<std::size_t> ranks_from_fronts(const std::vector<std::vector<std::size_t>>& fronts, std::size_t n) {
    std::vector<std::size_t> rank(n, 0);
    for (std::size_t k = 0; k < fronts.size(); ++k)
        for (auto i : fronts[k]) rank[i] = k;
    return rank;
}

/// Crowding distance within one front. Boundary points per objective get +inf;
/// an objective with zero range contributes nothing.
inline std::vector<double> crowding_distance(const std::vector<Vector>& front) {
    const std::size_t n = front.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (n <= 2) return std::vector<double>(n, inf);

    std::vector<double> dist(n, 0.0);
    const std::size_t m = front.front().size();
    std::vector<std::size_t> order(n);
    for (std::size_t k = 0; k < m; ++k) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return front[a][k] < front[b][k]; });
        const double lo = front[order.front()][k];
        const double hi = front[order.back()][k];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = hi - lo;
        if (range <= 0.0) continue;
        for (std::size_t r = 1; r + 1 < n; ++r) {
            const auto i = order[r];
            if (dist[i] == inf) continue;
            dist[i] += (front[order[r + 1]][k] - front[order[r - 1]][k]) / range;
        }
    }
    return dist;
}

/// max_k w_k |F_k - z*_k|
inline double tchebycheff(const Vector& f, const Vector& w, const Vector& z_star) {
    double v = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) v = std::max(v, w[k] * std::abs(f[k] - z_star[k]));
    return v;
}

}  // namespace efht
