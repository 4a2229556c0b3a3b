#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efht/operators.hpp"
#include "efht/problems.hpp"
#include "efht/rng.hpp"
#include "efht/types.hpp"

namespace efht {

struct EvolverConfig {
    OperatorParams ops;
    std::size_t pop_size = 100;
    std::size_t moead_t = 20;
};

/// Parent population plus algorithm-specific auxiliary state.
/// The MOEA/D fields stay empty for NSGA-II.
struct EvolverState {
    Population parents;
    long generation = 0;

    std::vector<Vector> weights;
    std::vector<std::vector<std::size_t>> neighbors;
    Vector ideal;

    bool operator==(const EvolverState&) const = default;
};

struct OffspringBatch {
    Population offspring;
    std::size_t evaluation_count = 0;
    long source_generation = 0;  // generation of the state the batch was produced from
};

/// FNV-1a over the bit patterns of everything in the state.
inline std::uint64_t state_hash(const EvolverState& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xffU;
            h *= 0x100000001b3ULL;
        }
    };
    auto mix_vec = [&](const Vector& v) {
        mix(v.size());
        for (double d : v) mix(std::bit_cast<std::uint64_t>(d));
    };
    mix(static_cast<std::uint64_t>(s.generation));
    for (const auto& ind : s.parents) {
        mix_vec(ind.x);
        mix_vec(ind.f);
    }
    for (const auto& w : s.weights) mix_vec(w);
    for (const auto& nb : s.neighbors) {
        mix(nb.size());
        for (auto i : nb) mix(i);
    }
    mix_vec(s.ideal);
    return h;
}

/// A generational MOEA split into the two phases the gain sampler needs:
/// offspring generation (read-only on the state) and environmental selection.
class Evolver {
public:
    Evolver(Problem problem, EvolverConfig config) : problem_(std::move(problem)), config_(config) {}
    virtual ~Evolver() = default;

    virtual std::string_view id() const = 0;
    virtual EvolverState initialize(Rng& rng) const = 0;
    virtual OffspringBatch generate_offspring(const EvolverState& state, Rng& rng) const = 0;
    virtual EvolverState environmental_selection(EvolverState state, const OffspringBatch& batch) const = 0;

    /// Offspring produced per generation (objective evaluations per generation).
    virtual std::size_t batch_size() const { return config_.pop_size; }

    const Problem& problem() const { return problem_; }
    const EvolverConfig& config() const { return config_; }

protected:
    Individual make_individual(Vector x) const {
        Vector f = problem_.evaluate(x);
        return {std::move(x), std::move(f)};
    }

    Population random_parents(std::size_t count, Rng& rng) const {
        Population pop;
        pop.reserve(count);
        for (std::size_t i = 0; i < count; ++i) pop.push_back(make_individual(random_point(problem_, rng)));
        return pop;
    }

    std::pair<Vector, Vector> crossover(const Vector& a, const Vector& b, Rng& rng) const {
        return sbx_crossover(a, b, config_.ops.eta_c, config_.ops.pc, problem_.lower(), problem_.upper(), rng);
    }

    Vector mutate(Vector x, Rng& rng) const {
        return polynomial_mutation(std::move(x), config_.ops.eta_m, config_.ops.mutation_rate(problem_.n()),
                                   problem_.lower(), problem_.upper(), rng);
    }

    void check_batch(const EvolverState& state, const OffspringBatch& batch) const {
        if (batch.source_generation != state.generation)
            throw std::logic_error("environmental_selection: stale offspring batch (generated at generation " +
                                   std::to_string(batch.source_generation) + ", state is at " +
                                   std::to_string(state.generation) + ")");
    }

private:
    Problem problem_;
    EvolverConfig config_;
};

class Nsga2 final : public Evolver {
public:
    using Evolver::Evolver;

    std::string_view id() const override { return "nsga2"; }

    EvolverState initialize(Rng& rng) const override {
        if (config().pop_size < 2) throw std::invalid_argument("nsga2: population size must be at least 2");
        EvolverState s;
        s.parents = random_parents(config().pop_size, rng);
        return s;
    }

    OffspringBatch generate_offspring(const EvolverState& state, Rng& rng) const override {
        const auto& parents = state.parents;
        const std::size_t n = parents.size();
        const auto objs = objectives_of(parents);
        const auto fronts = nondominated_sort(objs);
        const auto rank = ranks_from_fronts(fronts, n);
        std::vector<double> crowd(n, 0.0);
        for (const auto& front : fronts) {
            std::vector<Vector> fo;
            fo.reserve(front.size());
            for (auto i : front) fo.push_back(objs[i]);
            const auto cd = crowding_distance(fo);
            for (std::size_t k = 0; k < front.size(); ++k) crowd[front[k]] = cd[k];
        }

        auto tournament = [&]() -> std::size_t {
            const std::size_t a = rng.below(n);
            const std::size_t b = rng.below(n);
            if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
            return rng.coin() ? a : b;
        };

        OffspringBatch batch;
        batch.source_generation = state.generation;
        batch.offspring.reserve(n);
        while (batch.offspring.size() < n) {
            const auto& p1 = parents[tournament()].x;
            const auto& p2 = parents[tournament()].x;
            auto [c1, c2] = crossover(p1, p2, rng);
            batch.offspring.push_back(make_individual(mutate(std::move(c1), rng)));
            if (batch.offspring.size() < n) batch.offspring.push_back(make_individual(mutate(std::move(c2), rng)));
        }
        batch.evaluation_count = batch.offspring.size();
        return batch;
    }

    EvolverState environmental_selection(EvolverState state, const OffspringBatch& batch) const override {
        check_batch(state, batch);
        const std::size_t target = state.parents.size();
        Population merged = std::move(state.parents);
        merged.insert(merged.end(), batch.offspring.begin(), batch.offspring.end());

        const auto objs = objectives_of(merged);
        const auto fronts = nondominated_sort(objs);
        Population next;
        next.reserve(target);
        for (const auto& front : fronts) {
            if (next.size() + front.size() <= target) {
                for (auto i : front) next.push_back(merged[i]);
                continue;
            }
            std::vector<Vector> fo;
            for (auto i : front) fo.push_back(objs[i]);
            const auto cd = crowding_distance(fo);
            std::vector<std::size_t> order(front.size());
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
            for (std::size_t k = 0; next.size() < target; ++k) next.push_back(merged[front[order[k]]]);
            break;
        }
        state.parents = std::move(next);
        ++state.generation;
        return state;
    }
};

/// MOEA/D with Tchebycheff aggregation, run generationally: one offspring per
/// subproblem from the fixed parent state, then neighbourhood replacement.
class Moead final : public Evolver {
public:
    using Evolver::Evolver;

    std::string_view id() const override { return "moead"; }

    /// Simplex-lattice weights; for m = 2 this gives exactly pop_size vectors,
    /// for m = 3 the largest lattice not exceeding pop_size.
    std::vector<Vector> weight_vectors() const {
        const std::size_t m = problem().m();
        const std::size_t pop = config().pop_size;
        if (pop < 2) throw std::invalid_argument("moead: population size must be at least 2");
        return simplex_lattice(m, m == 2 ? pop - 1 : lattice_divisions(m, pop));
    }

    std::size_t batch_size() const override { return weight_vectors().size(); }

    EvolverState initialize(Rng& rng) const override {
        EvolverState s;
        s.weights = weight_vectors();
        const std::size_t n = s.weights.size();
        const std::size_t t = std::clamp<std::size_t>(config().moead_t, 2, n);
        s.neighbors.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::pair<double, std::size_t>> d;
            d.reserve(n);
            for (std::size_t j = 0; j < n; ++j) {
                double s2 = 0.0;
                for (std::size_t k = 0; k < s.weights[i].size(); ++k) {
                    const double diff = s.weights[i][k] - s.weights[j][k];
                    s2 += diff * diff;
                }
                d.emplace_back(s2, j);
            }
            std::stable_sort(d.begin(), d.end());
            for (std::size_t k = 0; k < t; ++k) s.neighbors[i].push_back(d[k].second);
        }
        s.parents = random_parents(n, rng);
        s.ideal = s.parents.front().f;
        for (const auto& ind : s.parents)
            for (std::size_t k = 0; k < s.ideal.size(); ++k) s.ideal[k] = std::min(s.ideal[k], ind.f[k]);
        return s;
    }

    OffspringBatch generate_offspring(const EvolverState& state, Rng& rng) const override {
        OffspringBatch batch;
        batch.source_generation = state.generation;
        batch.offspring.reserve(state.parents.size());
        for (std::size_t i = 0; i < state.parents.size(); ++i) {
            const auto& nb = state.neighbors[i];
            const std::size_t a = rng.below(nb.size());
            std::size_t b = rng.below(nb.size() - 1);
            if (b >= a) ++b;
            auto children = crossover(state.parents[nb[a]].x, state.parents[nb[b]].x, rng);
            batch.offspring.push_back(make_individual(mutate(std::move(children.first), rng)));
        }
        batch.evaluation_count = batch.offspring.size();
        return batch;
    }

    EvolverState environmental_selection(EvolverState state, const OffspringBatch& batch) const override {
        check_batch(state, batch);
        if (batch.offspring.size() != state.parents.size())
            throw std::logic_error("moead: batch size does not match the number of subproblems");
        for (std::size_t i = 0; i < batch.offspring.size(); ++i) {
            const auto& y = batch.offspring[i];
            for (std::size_t k = 0; k < state.ideal.size(); ++k) state.ideal[k] = std::min(state.ideal[k], y.f[k]);
            for (auto j : state.neighbors[i]) {
                const auto& w = state.weights[j];
                if (tchebycheff(y.f, w, state.ideal) <= tchebycheff(state.parents[j].f, w, state.ideal))
                    state.parents[j] = y;
            }
        }
        ++state.generation;
        return state;
    }
};

inline std::unique_ptr<Evolver> make_evolver(std::string_view id, const Problem& problem, const EvolverConfig& config) {
    if (id == "nsga2") return std::make_unique<Nsga2>(problem, config);
    if (id == "moead") return std::make_unique<Moead>(problem, config);
    throw std::invalid_argument("unknown evolver id '" + std::string(id) + "'");
}

}  // namespace efht
