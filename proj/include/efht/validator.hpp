#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "efht/bound_engine.hpp"
#include "efht/gain_sampler.hpp"

namespace efht {

/// One validation run: psi trajectory (psi_0 .. psi_T) and hitting generation.
struct RunTrace {
    long hitting_generation = -1;  // -1: budget exhausted before psi <= eps
    double x0 = 0.0;
    std::vector<double> psi;
};

/// Empirical first-hitting-time statistics over independent runs. mean/std
/// (sample standard deviation) cover hitting runs only.
struct RunStats {
    std::string problem;
    std::string evolver;
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t runs = 0;
    long budget = 0;
    std::size_t offspring_per_generation = 0;
    std::vector<long> hitting_generations;  // -1 marks a non-hit
    std::vector<double> x0;
    double mean = 0.0;
    double std = 0.0;
    double mean_evaluations = 0.0;
    double std_evaluations = 0.0;
    double mean_x0 = 0.0;
    double hit_rate = 0.0;

    bool infeasible() const { return hit_rate == 0.0; }
};

/// Evolves until the best-so-far IGD (tracked on parents ∪ offspring) reaches
/// eps or the generation budget runs out.
inline RunTrace measure_fht_run(const Evolver& evolver, const ReferenceFront& ref, double epsilon, long budget,
                                std::uint64_t run_seed) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("measure_fht: epsilon must be positive");
    Rng rng(run_seed);
    EvolverState state = evolver.initialize(rng);
    RunTrace trace;
    double psi = igd(objectives_of(state.parents), ref);
    trace.x0 = psi;
    trace.psi.push_back(psi);
    for (long t = 0;; ++t) {
        if (psi <= epsilon) {
            trace.hitting_generation = t;
            break;
        }
        if (t >= budget) break;
        const OffspringBatch batch = evolver.generate_offspring(state, rng);
        const auto base = nearest_squared_distances(objectives_of(state.parents), ref);
        psi = std::min(psi, igd_with_base(base, objectives_of(batch.offspring), ref));
        state = evolver.environmental_selection(std::move(state), batch);
        trace.psi.push_back(psi);
    }
    return trace;
}

namespace detail {
inline void mean_std(const std::vector<double>& v, double& mean, double& sd) {
    mean = sd = 0.0;
    if (v.empty()) return;
    mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    if (v.size() < 2) return;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}
}  // namespace detail

inline RunStats summarize_runs(const std::vector<RunTrace>& traces, std::size_t offspring_per_generation) {
    RunStats st;
    st.runs = traces.size();
    st.offspring_per_generation = offspring_per_generation;
    std::vector<double> hits, hit_evals;
    for (const auto& tr : traces) {
        st.hitting_generations.push_back(tr.hitting_generation);
        st.x0.push_back(tr.x0);
        if (tr.hitting_generation >= 0) {
            hits.push_back(static_cast<double>(tr.hitting_generation));
            hit_evals.push_back(static_cast<double>(tr.hitting_generation) * static_cast<double>(offspring_per_generation));
        }
    }
    detail::mean_std(hits, st.mean, st.std);
    detail::mean_std(hit_evals, st.mean_evaluations, st.std_evaluations);
    st.mean_x0 = st.x0.empty() ? 0.0 : std::accumulate(st.x0.begin(), st.x0.end(), 0.0) / static_cast<double>(st.x0.size());
    st.hit_rate = st.runs ? static_cast<double>(hits.size()) / static_cast<double>(st.runs) : 0.0;
    return st;
}

inline std::uint64_t validation_stream(std::uint64_t seed, std::size_t n, std::size_t run) {
    return stream_seed({static_cast<std::uint64_t>(StreamTag::validation), seed, n, run});
}

/// Independent runs with per-run seeded streams; traces come back in run order.
inline std::vector<RunTrace> measure_fht_traces(const Evolver& evolver, const ReferenceFront& ref, double epsilon,
                                                std::size_t runs, long budget, std::uint64_t seed,
                                                std::size_t jobs = 1) {
    if (runs == 0) throw std::invalid_argument("measure_fht: runs must be at least 1");
    std::vector<RunTrace> traces(runs);
    const std::size_t n = evolver.problem().n();
    parallel_for(runs, jobs, [&](std::size_t r) {
        traces[r] = measure_fht_run(evolver, ref, epsilon, budget, validation_stream(seed, n, r));
    });
    return traces;
}

struct ValidateSpec {
    std::string problem;
    std::string evolver;
    EvolverConfig evolver_config;
    std::size_t n = 0;
    double epsilon = 0.0;
    std::size_t runs = 100;
    long budget = 0;  // 0 means 100 * n
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

inline RunStats measure_fht(const ValidateSpec& spec) {
    const Problem problem(parse_problem_id(spec.problem), spec.n);
    const auto evolver = make_evolver(spec.evolver, problem, spec.evolver_config);
    const auto ref = reference_front(problem);
    const long budget = spec.budget > 0 ? spec.budget : static_cast<long>(100 * spec.n);
    const auto traces = measure_fht_traces(*evolver, ref, spec.epsilon, spec.runs, budget, spec.seed, spec.jobs);
    RunStats st = summarize_runs(traces, evolver->batch_size());
    st.problem = spec.problem;
    st.evolver = spec.evolver;
    st.n = spec.n;
    st.epsilon = spec.epsilon;
    st.budget = budget;
    return st;
}

enum class Verdict { correct, violated, rejected };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::correct: return "correct";
        case Verdict::violated: return "violated";
        case Verdict::rejected: return "rejected";
    }
    return "?";
}

enum class Unit { generations, evaluations };

inline const char* to_string(Unit u) { return u == Unit::generations ? "generations" : "evaluations"; }

struct BoundCheck {
    Verdict verdict = Verdict::rejected;
    Unit unit = Unit::evaluations;
    double bound = 0.0;
    double empirical_mean = 0.0;
    double r2 = 0.0;
};

namespace detail {
inline bool same_epsilon(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

inline void check_same_setting(const BoundEstimate& b, const RunStats& s) {
    if (!b.problem.empty() && !s.problem.empty() && b.problem != s.problem)
        throw std::invalid_argument("setting mismatch: problem (" + b.problem + " vs " + s.problem + ")");
    if (b.n != s.n)
        throw std::invalid_argument("setting mismatch: n (" + std::to_string(b.n) + " vs " + std::to_string(s.n) + ")");
    if (!same_epsilon(b.epsilon, s.epsilon)) throw std::invalid_argument("setting mismatch: epsilon");
}
}  // namespace detail

/// correct: R^2 > 0 and mean <= bound; rejected: R^2 <= 0; violated otherwise.
inline BoundCheck check_bound(const BoundEstimate& bound, const RunStats& stats, Unit unit = Unit::evaluations) {
    detail::check_same_setting(bound, stats);
    if (unit == Unit::evaluations && bound.offspring_per_generation != stats.offspring_per_generation)
        throw std::invalid_argument("unit mismatch: bound counts " + std::to_string(bound.offspring_per_generation) +
                                    " evaluations per generation, runs count " +
                                    std::to_string(stats.offspring_per_generation));
    if (stats.infeasible()) throw std::invalid_argument("check_bound: no run reached epsilon; nothing to compare");

    BoundCheck c;
    c.unit = unit;
    c.r2 = bound.params.r2;
    c.bound = unit == Unit::generations ? bound.value : bound.value_evaluations;
    c.empirical_mean = unit == Unit::generations ? stats.mean : stats.mean_evaluations;
    if (!(c.r2 > 0.0))
        c.verdict = Verdict::rejected;
    else
        c.verdict = c.empirical_mean <= c.bound ? Verdict::correct : Verdict::violated;
    return c;
}

struct RankingEntry {
    std::string evolver;
    double bound = 0.0;
    double empirical_mean = 0.0;
    std::size_t bound_rank = 0;      // 0 = fastest
    std::size_t empirical_rank = 0;
};

struct ComparisonReport {
    std::string problem;
    std::size_t n = 0;
    double epsilon = 0.0;
    std::vector<RankingEntry> entries;
    bool consistent = false;
};

/// Ranks algorithms by bound and by empirical mean FHT (generations) and
/// reports whether the two orders agree.
inline ComparisonReport compare_algorithms(const std::vector<BoundEstimate>& bounds, const std::vector<RunStats>& stats) {
    if (bounds.size() != stats.size() || bounds.size() < 2)
        throw std::invalid_argument("compare_algorithms: need matching bound/stat lists with at least two entries");
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        detail::check_same_setting(bounds[i], stats[i]);
        if (bounds[i].problem != bounds[0].problem || bounds[i].n != bounds[0].n ||
            !detail::same_epsilon(bounds[i].epsilon, bounds[0].epsilon))
            throw std::invalid_argument("compare_algorithms: mismatched settings across entries");
        if (stats[i].infeasible()) throw std::invalid_argument("compare_algorithms: a run set never reached epsilon");
    }
    ComparisonReport rep;
    rep.problem = bounds[0].problem;
    rep.n = bounds[0].n;
    rep.epsilon = bounds[0].epsilon;
    const std::size_t k = bounds.size();
    for (std::size_t i = 0; i < k; ++i) rep.entries.push_back({stats[i].evolver, bounds[i].value, stats[i].mean, 0, 0});

    auto rank_by = [&](auto key) {
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key(a) < key(b); });
        std::vector<std::size_t> rank(k);
        for (std::size_t r = 0; r < k; ++r) rank[order[r]] = r;
        return rank;
    };
    const auto br = rank_by([&](std::size_t i) { return rep.entries[i].bound; });
    const auto er = rank_by([&](std::size_t i) { return rep.entries[i].empirical_mean; });
    rep.consistent = true;
    for (std::size_t i = 0; i < k; ++i) {
        rep.entries[i].bound_rank = br[i];
        rep.entries[i].empirical_rank = er[i];
        rep.consistent &= br[i] == er[i];
    }
    return rep;
}

struct StabilityReport {
    std::size_t trials = 0;
    double cv_coefficient = 0.0;  // of 1/A
    double cv_exponent = 0.0;     // of d
    double mean_coefficient = 0.0;
    double mean_exponent = 0.0;
    std::vector<FitParams> params;
};

/// Coefficient of variation sigma/mu with the population standard deviation.
inline double coefficient_of_variation(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("coefficient_of_variation: no values");
    // Shifted by the first value so identical inputs give exactly zero.
    const double shift = v.front();
    double sum = 0.0;
    for (double x : v) sum += x - shift;
    const double offset = sum / static_cast<double>(v.size());
    const double mu = shift + offset;
    if (mu == 0.0) throw std::domain_error("coefficient_of_variation: mean is zero");
    double ss = 0.0;
    for (double x : v) ss += (x - shift - offset) * (x - shift - offset);
    return std::sqrt(ss / static_cast<double>(v.size())) / std::abs(mu);
}

inline StabilityReport stability_cv(const std::vector<FitParams>& trials) {
    if (trials.size() < 2) throw std::invalid_argument("stability_cv: need at least two trials");
    std::vector<double> coef, expo;
    for (const auto& p : trials) {
        coef.push_back(p.coefficient());
        expo.push_back(p.d);
    }
    StabilityReport rep;
    rep.trials = trials.size();
    rep.cv_coefficient = coefficient_of_variation(coef);
    rep.cv_exponent = coefficient_of_variation(expo);
    rep.mean_coefficient = std::accumulate(coef.begin(), coef.end(), 0.0) / static_cast<double>(coef.size());
    rep.mean_exponent = std::accumulate(expo.begin(), expo.end(), 0.0) / static_cast<double>(expo.size());
    rep.params = trials;
    return rep;
}

}  // namespace efht
