#pragma once

#include "efht/bound_engine.hpp"
#include "efht/config.hpp"
#include "efht/gain_sampler.hpp"
#include "efht/sample_selector.hpp"
#include "efht/surface_fit.hpp"
#include "efht/validator.hpp"

namespace efht {

struct Estimate {
    SampleSet samples;
    SelectedSamples selected;
    FitParams fit;
};

inline FitParams fit_selected(const SelectedSamples& sel, const PipelineConfig& c) {
    FitParams fp = fit_power_surface(sel.points, c.fit_box);
    if (c.enforce_lower_bound) fp = enforce_lower_bound(fp, sel.points);
    return fp;
}

/// collect -> select -> fit for a resolved config.
inline Estimate estimate(const PipelineConfig& c, std::size_t jobs = 1) {
    Estimate e;
    e.samples = collect(collect_spec(c, jobs));
    e.selected = select(e.samples, {c.span});
    e.fit = fit_selected(e.selected, c);
    return e;
}

/// Bound at the setting of a validation run set (n, eps, mean X0, batch size).
inline BoundEstimate bound_for(const FitParams& fit, const RunStats& stats) {
    BoundEstimate b = efht_upper_closed(fit, stats.n, stats.mean_x0, stats.epsilon, stats.offspring_per_generation);
    b.problem = stats.problem;
    b.evolver = stats.evolver;
    return b;
}

}  // namespace efht
