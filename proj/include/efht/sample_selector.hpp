#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "efht/gain_sampler.hpp"
#include "efht/loess.hpp"

namespace efht {

struct GainPoint {
    double psi = 0.0;
    double gain = 0.0;

    bool operator==(const GainPoint&) const = default;
};

struct SelectedPoint {
    std::size_t n = 0;
    double psi = 0.0;
    double gain = 0.0;

    bool operator==(const SelectedPoint&) const = default;
};

/// Per-dimension bookkeeping for one selection pass.
struct DimensionSelection {
    std::size_t n = 0;
    std::size_t target_m = 0;        // 2n
    std::size_t selected = 0;        // < target_m when the data ran short
    std::size_t input_count = 0;     // samples before zero removal
    std::size_t nonzero_count = 0;   // after zero removal
    std::size_t dropped_nonpositive = 0;  // smoothed gains <= 0, discarded
    bool smoothed = true;            // false when fewer than 3 points survived
    double lambda = 1.0;
    double psi_min = 0.0;
    double psi_max = 0.0;
    double span = 0.0;

    bool shortfall() const { return selected < target_m; }
    bool operator==(const DimensionSelection&) const = default;
};

struct SelectedSamples {
    std::vector<SelectedPoint> points;
    std::vector<DimensionSelection> dims;
    SampleMeta source;
};

struct SelectOptions {
    double span = 0.3;
};

inline std::vector<GainSample> remove_zero_gain(const std::vector<GainSample>& samples) {
    std::vector<GainSample> out;
    std::copy_if(samples.begin(), samples.end(), std::back_inserter(out),
                 [](const GainSample& s) { return s.avg_gain > 0.0; });
    if (out.empty() && !samples.empty())
        throw std::runtime_error("remove_zero_gain: every sample has zero gain (collection stagnated)");
    return out;
}

inline std::vector<double> loess_smooth(const std::vector<GainPoint>& points, double span) {
    std::vector<double> x, y;
    x.reserve(points.size());
    y.reserve(points.size());
    for (const auto& p : points) {
        x.push_back(p.psi);
        y.push_back(p.gain);
    }
    return loess(x, y, span);
}

/// Nearest-point selection against M evenly spaced psi targets. Repeated picks
/// collapse, so fewer than M points may come back. When M covers every
/// distinct psi value, all points are returned.
inline std::vector<GainPoint> select_uniform(const std::vector<GainPoint>& points, std::size_t m) {
    if (points.empty()) return {};
    if (m < 2) throw std::invalid_argument("select_uniform: M must be at least 2");

    std::vector<GainPoint> sorted = points;
    std::stable_sort(sorted.begin(), sorted.end(), [](const GainPoint& a, const GainPoint& b) { return a.psi < b.psi; });
    std::size_t distinct = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].psi != sorted[i - 1].psi) ++distinct;
    if (m >= distinct) return sorted;

    const double lo = sorted.front().psi;
    const double hi = sorted.back().psi;
    std::vector<bool> taken(sorted.size(), false);
    for (std::size_t i = 0; i < m; ++i) {
        const double xi = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(m - 1);
        // First index with psi >= xi; the nearest point is there or just before it.
        auto it = std::lower_bound(sorted.begin(), sorted.end(), xi,
                                   [](const GainPoint& p, double v) { return p.psi < v; });
        std::size_t best = static_cast<std::size_t>(it - sorted.begin());
        if (best == sorted.size()) {
            best = sorted.size() - 1;
        } else if (best > 0) {
            // Walk back to the first member of the tie group before comparing.
            std::size_t prev = best - 1;
            while (prev > 0 && sorted[prev - 1].psi == sorted[prev].psi) --prev;
            if (std::abs(sorted[prev].psi - xi) <= std::abs(sorted[best].psi - xi)) best = prev;
        }
        taken[best] = true;
    }
    std::vector<GainPoint> out;
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (taken[i]) out.push_back(sorted[i]);
    return out;
}

/// Multiplies every gain by lambda = max / mean; returns lambda.
inline double scale_gains(std::vector<GainPoint>& points) {
    if (points.empty()) throw std::invalid_argument("scale_gains: no points");
    double gmax = 0.0, sum = 0.0;
    for (const auto& p : points) {
        if (!(p.gain > 0.0)) throw std::invalid_argument("scale_gains: gains must be positive");
        gmax = std::max(gmax, p.gain);
        sum += p.gain;
    }
    const double lambda = std::max(1.0, gmax / (sum / static_cast<double>(points.size())));
    for (auto& p : points) p.gain *= lambda;
    return lambda;
}

/// Adaptive sample point selection, per dimension: zero removal, LOESS,
/// M = 2n uniform-psi picks, lambda scaling. Deterministic.
inline SelectedSamples select(const SampleSet& set, const SelectOptions& opt = {}) {
    std::vector<std::size_t> dims;
    for (const auto& s : set.samples)
        if (std::find(dims.begin(), dims.end(), s.n) == dims.end()) dims.push_back(s.n);
    std::sort(dims.begin(), dims.end());
    if (dims.empty()) throw std::invalid_argument("select: sample set is empty");

    SelectedSamples out;
    out.source = set.meta;
    for (auto n : dims) {
        DimensionSelection info;
        info.n = n;
        info.target_m = 2 * n;
        info.span = opt.span;

        std::vector<GainSample> own;
        for (const auto& s : set.samples)
            if (s.n == n) own.push_back(s);
        info.input_count = own.size();
        const auto nonzero = remove_zero_gain(own);
        info.nonzero_count = nonzero.size();

        std::vector<GainPoint> pts;
        for (const auto& s : nonzero) pts.push_back({s.psi, s.avg_gain});
        if (pts.size() >= 3) {
            const auto smooth = loess_smooth(pts, opt.span);
            std::vector<GainPoint> kept;
            for (std::size_t i = 0; i < pts.size(); ++i) {
                if (smooth[i] > 0.0)
                    kept.push_back({pts[i].psi, smooth[i]});
                else
                    ++info.dropped_nonpositive;
            }
            pts = std::move(kept);
        } else {
            info.smoothed = false;
        }
        if (pts.empty())
            throw std::runtime_error("select: no positive smoothed gains left for n = " + std::to_string(n));

        const auto [mn, mx] = std::minmax_element(pts.begin(), pts.end(),
                                                  [](const GainPoint& a, const GainPoint& b) { return a.psi < b.psi; });
        info.psi_min = mn->psi;
        info.psi_max = mx->psi;

        auto chosen = select_uniform(pts, std::max<std::size_t>(info.target_m, 2));
        info.lambda = scale_gains(chosen);
        info.selected = chosen.size();
        for (const auto& p : chosen) out.points.push_back({n, p.psi, p.gain});
        out.dims.push_back(info);
    }
    return out;
}

}  // namespace efht
