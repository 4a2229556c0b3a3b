#pragma once

#include <map>

#include "efht/evolvers.hpp"

// Test doubles. Every stub has a single-point population whose objective
// vector is (v, 0). Against the reference front {(0, 0)} its IGD is exactly v.
namespace stubs {

using namespace efht;

inline ReferenceFront origin_front() {
    ReferenceFront f;
    f.points = {{0.0, 0.0}};
    return f;
}

inline Individual point(double v) { return {{0.5}, {v, 0.0}}; }

class StubBase : public Evolver {
public:
    explicit StubBase(double start) : Evolver(Problem(ProblemId::oneminmax, 1), {}), start_(start) {}
    std::size_t batch_size() const override { return 1; }

    EvolverState initialize(Rng&) const override {
        EvolverState s;
        s.parents = {point(start_)};
        return s;
    }

    EvolverState environmental_selection(EvolverState state, const OffspringBatch& batch) const override {
        check_batch(state, batch);
        if (batch.offspring.front().f[0] < state.parents.front().f[0]) state.parents = batch.offspring;
        ++state.generation;
        return state;
    }

protected:
    OffspringBatch single(const EvolverState& s, double v) const {
        OffspringBatch b;
        b.offspring = {point(v)};
        b.evaluation_count = 1;
        b.source_generation = s.generation;
        return b;
    }

private:
    double start_;
};

/// Each offspring has half the parent's IGD: 1, 0.5, 0.25, ...
class Halving final : public StubBase {
public:
    Halving() : StubBase(1.0) {}
    std::string_view id() const override { return "halving"; }
    OffspringBatch generate_offspring(const EvolverState& s, Rng&) const override {
        return single(s, s.parents.front().f[0] / 2);
    }
};

/// Offspring are never better than the parent.
class Stagnant final : public StubBase {
public:
    Stagnant() : StubBase(1.0) {}
    std::string_view id() const override { return "stagnant"; }
    OffspringBatch generate_offspring(const EvolverState& s, Rng& rng) const override {
        return single(s, 1.0 + rng.uniform());
    }
};

/// The offspring IGD is chosen by the RNG's first draw, so a caller that
/// controls the probe seeds controls each probe's gain.
class Scripted final : public StubBase {
public:
    explicit Scripted(std::map<std::uint64_t, double> by_first_draw)
        : StubBase(1.0), table_(std::move(by_first_draw)) {}
    std::string_view id() const override { return "scripted"; }
    OffspringBatch generate_offspring(const EvolverState& s, Rng& rng) const override {
        const auto it = table_.find(rng.next());
        return single(s, it == table_.end() ? 2.0 : it->second);
    }

private:
    std::map<std::uint64_t, double> table_;
};

/// Offspring IGD is parent IGD times a random factor in [0.5, 1.5).
class Noisy final : public StubBase {
public:
    Noisy() : StubBase(1.0) {}
    std::string_view id() const override { return "noisy"; }
    OffspringBatch generate_offspring(const EvolverState& s, Rng& rng) const override {
        return single(s, s.parents.front().f[0] * rng.uniform(0.5, 1.5));
    }
};

}  // namespace stubs
