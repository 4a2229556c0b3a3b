#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "efht/evolvers.hpp"
#include "efht/metrics.hpp"
#include "efht/parallel.hpp"
#include "efht/problems.hpp"
#include "efht/rng.hpp"

namespace efht {

/// One generation's (psi_t, mean probe gain) observation.
struct GainSample {
    std::size_t n = 0;
    long t = 0;
    double psi = 0.0;
    double avg_gain = 0.0;
    std::size_t probe_count = 0;

    bool operator==(const GainSample&) const = default;
};

struct SampleMeta {
    std::string problem;
    std::string evolver;
    std::uint64_t seed = 0;
    std::size_t probe_count = 0;
    std::size_t pop_size = 0;
    double epsilon_collect = 0.0;
};

struct SampleSet {
    std::vector<GainSample> samples;
    std::vector<std::size_t> dims;
    SampleMeta meta;
};

// Domain tags keep the seed streams for initialization, probes and the
// advancing batch disjoint.
enum class StreamTag : std::uint64_t { init = 1, probe = 2, advance = 3, validation = 4 };

inline std::uint64_t probe_stream(std::uint64_t seed, std::size_t n, long t, std::size_t i) {
    return stream_seed({static_cast<std::uint64_t>(StreamTag::probe), seed, n, static_cast<std::uint64_t>(t), i});
}

struct ProbeResult {
    double psi = 0.0;
    double avg_gain = 0.0;
    std::vector<double> gains;
};

/// K side-effect-free offspring generations from the same parent state.
/// Probe i scores min(psi_t, IGD(parents ∪ offspring_i)) and gains the
/// difference; the mean over probes is returned. `stream(i)` gives the seed of
/// probe i's private RNG.
template <class StreamFn>
ProbeResult probe_generation(const Evolver& evolver, const EvolverState& state, const ReferenceFront& ref,
                             double psi_t, std::size_t k, StreamFn&& stream, std::size_t jobs = 1) {
    if (k == 0) throw std::invalid_argument("probe_generation: K must be at least 1");
    const auto base = nearest_squared_distances(objectives_of(state.parents), ref);

    ProbeResult result;
    result.psi = psi_t;
    result.gains.assign(k, 0.0);
    parallel_for(k, jobs, [&](std::size_t i) {
        Rng rng(stream(i));
        const OffspringBatch batch = evolver.generate_offspring(state, rng);
        const double probe_psi = std::min(psi_t, igd_with_base(base, objectives_of(batch.offspring), ref));
        result.gains[i] = igd_gain(psi_t, probe_psi);
    });
    double sum = 0.0;
    for (double g : result.gains) sum += g;
    result.avg_gain = sum / static_cast<double>(k);
    return result;
}

struct Termination {
    double epsilon = 0.0;      // stop once psi_t <= epsilon (0 disables)
    long max_generations = 0;  // 0 means 100 * n
};

inline long generation_budget(const Termination& term, std::size_t n) {
    return term.max_generations > 0 ? term.max_generations : static_cast<long>(100 * n);
}

/// Runs the evolver for one dimension, probing every generation.
inline std::vector<GainSample> collect_dimension(const Evolver& evolver, const ReferenceFront& ref, std::size_t k,
                                                 const Termination& term, std::uint64_t seed, std::size_t jobs = 1) {
    const std::size_t n = evolver.problem().n();
    Rng init_rng(stream_seed({static_cast<std::uint64_t>(StreamTag::init), seed, n}));
    EvolverState state = evolver.initialize(init_rng);

    IgdTracker tracker = update_best({}, igd(objectives_of(state.parents), ref));
    const long budget = generation_budget(term, n);

    std::vector<GainSample> out;
    for (long t = 0; t < budget && tracker.best_so_far > term.epsilon; ++t) {
        const double psi_t = tracker.best_so_far;
        const auto probe = probe_generation(
            evolver, state, ref, psi_t, k, [&](std::size_t i) { return probe_stream(seed, n, t, i); }, jobs);

        Rng adv_rng(stream_seed({static_cast<std::uint64_t>(StreamTag::advance), seed, n, static_cast<std::uint64_t>(t)}));
        const OffspringBatch batch = evolver.generate_offspring(state, adv_rng);
        const auto base = nearest_squared_distances(objectives_of(state.parents), ref);
        tracker = update_best(tracker, igd_with_base(base, objectives_of(batch.offspring), ref));
        state = evolver.environmental_selection(std::move(state), batch);

        out.push_back({n, t, psi_t, probe.avg_gain, k});
    }
    return out;
}

struct CollectSpec {
    std::string problem;
    std::string evolver;
    EvolverConfig evolver_config;
    std::vector<std::size_t> dims;
    std::size_t k = 100;
    Termination termination;
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

/// Gain data collection over a set of dimensions; output ordered by (n, t).
inline SampleSet collect(const CollectSpec& spec) {
    if (spec.dims.empty()) throw std::invalid_argument("collect: dimension set is empty");
    if (spec.k == 0) throw std::invalid_argument("collect: K must be at least 1");
    const ProblemId pid = parse_problem_id(spec.problem);

    SampleSet set;
    set.dims = spec.dims;
    set.meta = {spec.problem, spec.evolver, spec.seed, spec.k, spec.evolver_config.pop_size, spec.termination.epsilon};
    for (auto n : spec.dims) {
        const Problem problem(pid, n);
        const auto evolver = make_evolver(spec.evolver, problem, spec.evolver_config);
        const auto ref = reference_front(problem);
        auto part = collect_dimension(*evolver, ref, spec.k, spec.termination, spec.seed, spec.jobs);
        set.samples.insert(set.samples.end(), part.begin(), part.end());
    }
    std::stable_sort(set.samples.begin(), set.samples.end(), [](const GainSample& a, const GainSample& b) {
        return a.n != b.n ? a.n < b.n : a.t < b.t;
    });
    return set;
}

/// Empirical distribution function: fraction of values <= r.
inline double ecdf(const std::vector<double>& values, double r) {
    if (values.empty()) throw std::invalid_argument("ecdf: empty sample");
    const auto count = std::count_if(values.begin(), values.end(), [r](double v) { return v <= r; });
    return static_cast<double>(count) / static_cast<double>(values.size());
}

}  // namespace efht
