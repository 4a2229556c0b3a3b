#pragma once

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "efht/evolvers.hpp"
#include "efht/gain_sampler.hpp"
#include "efht/problems.hpp"
#include "efht/sample_selector.hpp"
#include "efht/surface_fit.hpp"
#include "efht/validator.hpp"

namespace efht {

using json = nlohmann::ordered_json;

/// Every knob of the collect -> select -> fit -> bound -> validate pipeline.
/// Only `problem` and `evolver` lack defaults; the problem-dependent ones
/// (dims, epsilon) are filled in by `resolve`.
struct PipelineConfig {
    std::string problem;
    std::string evolver;
    std::vector<std::size_t> dims;
    std::size_t k = 100;
    std::size_t pop_size = 100;
    std::size_t moead_t = 20;
    OperatorParams operators;
    double epsilon = 0.0;          // bound / validation target; 0 = problem default
    double epsilon_collect = 0.0;  // collection stop; 0 = epsilon
    long max_generations = 0;      // collection budget; 0 = 100 n
    std::size_t runs = 100;
    long validation_budget = 0;    // 0 = 100 n
    std::uint64_t seed = 1;
    std::uint64_t validation_seed = 1;
    double span = 0.3;
    FitBox fit_box;
    bool enforce_lower_bound = false;

    EvolverConfig evolver_config() const { return {operators, pop_size, moead_t}; }
};

inline std::vector<std::size_t> default_dims(ProblemId id) {
    if (id == ProblemId::zdt4 || id == ProblemId::zdt6) return {2, 4, 6, 8, 10};
    return {5, 10, 15, 20, 25, 30};
}

/// Target precision per problem. OneMinMax objectives span [0, n] rather than
/// [0, 1], so its IGD scale is larger.
inline double default_epsilon(ProblemId id) { return id == ProblemId::oneminmax ? 0.1 : 0.05; }

inline PipelineConfig resolve(PipelineConfig c) {
    if (c.problem.empty()) throw std::invalid_argument("config: problem is required");
    if (c.evolver.empty()) throw std::invalid_argument("config: evolver is required");
    const ProblemId id = parse_problem_id(c.problem);
    if (c.evolver != "nsga2" && c.evolver != "moead") throw std::invalid_argument("config: unknown evolver '" + c.evolver + "'");
    if (c.dims.empty()) c.dims = default_dims(id);
    for (auto n : c.dims) Problem(id, n);  // validates the dimension
    if (c.epsilon == 0.0) c.epsilon = default_epsilon(id);
    if (c.epsilon_collect == 0.0) c.epsilon_collect = c.epsilon;
    if (!(c.epsilon > 0.0) || !(c.epsilon_collect > 0.0)) throw std::invalid_argument("config: epsilon must be positive");
    if (c.k == 0) throw std::invalid_argument("config: k must be at least 1");
    if (c.runs == 0) throw std::invalid_argument("config: runs must be at least 1");
    if (c.pop_size < 2) throw std::invalid_argument("config: pop_size must be at least 2");
    if (!(c.span > 0.0) || c.span > 1.0) throw std::invalid_argument("config: span must lie in (0, 1]");
    return c;
}

inline json to_json(const FitBox& b) {
    return {{"b_min", b.b_min},         {"b_max", b.b_max},         {"d_min", b.d_min},
            {"d_max", b.d_max},         {"inv_a_min", b.inv_a_min}, {"inv_a_max", b.inv_a_max}};
}

inline json to_json(const PipelineConfig& c) {
    json ops = {{"pc", c.operators.pc}, {"eta_c", c.operators.eta_c}, {"pm", nullptr}, {"eta_m", c.operators.eta_m}};
    if (c.operators.pm >= 0.0) ops["pm"] = c.operators.pm;
    return {{"problem", c.problem},
            {"evolver", c.evolver},
            {"dims", c.dims},
            {"k", c.k},
            {"pop_size", c.pop_size},
            {"moead_t", c.moead_t},
            {"operators", ops},
            {"epsilon", c.epsilon},
            {"epsilon_collect", c.epsilon_collect},
            {"max_generations", c.max_generations},
            {"runs", c.runs},
            {"validation_budget", c.validation_budget},
            {"seed", c.seed},
            {"validation_seed", c.validation_seed},
            {"span", c.span},
            {"fit_box", to_json(c.fit_box)},
            {"enforce_lower_bound", c.enforce_lower_bound}};
}

namespace detail {

template <class T>
void read_field(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<T>();
}

inline void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok |= it.key() == k;
        if (!ok) throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace detail

inline FitBox fit_box_from_json(const json& j) {
    detail::reject_unknown(j, {"b_min", "b_max", "d_min", "d_max", "inv_a_min", "inv_a_max"}, "fit_box");
    FitBox b;
    detail::read_field(j, "b_min", b.b_min);
    detail::read_field(j, "b_max", b.b_max);
    detail::read_field(j, "d_min", b.d_min);
    detail::read_field(j, "d_max", b.d_max);
    detail::read_field(j, "inv_a_min", b.inv_a_min);
    detail::read_field(j, "inv_a_max", b.inv_a_max);
    return b;
}

/// Missing keys keep their defaults; unknown keys are an error so typos do
/// not silently fall back to defaults.
inline PipelineConfig config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: expected a JSON object");
    detail::reject_unknown(j,
                           {"problem", "evolver", "dims", "k", "pop_size", "moead_t", "operators", "epsilon",
                            "epsilon_collect", "max_generations", "runs", "validation_budget", "seed", "validation_seed",
                            "span", "fit_box", "enforce_lower_bound"},
                           "top level");
    PipelineConfig c;
    detail::read_field(j, "problem", c.problem);
    detail::read_field(j, "evolver", c.evolver);
    detail::read_field(j, "dims", c.dims);
    detail::read_field(j, "k", c.k);
    detail::read_field(j, "pop_size", c.pop_size);
    detail::read_field(j, "moead_t", c.moead_t);
    if (auto it = j.find("operators"); it != j.end()) {
        detail::reject_unknown(*it, {"pc", "eta_c", "pm", "eta_m"}, "operators");
        detail::read_field(*it, "pc", c.operators.pc);
        detail::read_field(*it, "eta_c", c.operators.eta_c);
        detail::read_field(*it, "pm", c.operators.pm);
        detail::read_field(*it, "eta_m", c.operators.eta_m);
    }
    detail::read_field(j, "epsilon", c.epsilon);
    detail::read_field(j, "epsilon_collect", c.epsilon_collect);
    detail::read_field(j, "max_generations", c.max_generations);
    detail::read_field(j, "runs", c.runs);
    detail::read_field(j, "validation_budget", c.validation_budget);
    detail::read_field(j, "seed", c.seed);
    detail::read_field(j, "validation_seed", c.validation_seed);
    detail::read_field(j, "span", c.span);
    if (auto it = j.find("fit_box"); it != j.end()) c.fit_box = fit_box_from_json(*it);
    detail::read_field(j, "enforce_lower_bound", c.enforce_lower_bound);
    return c;
}

inline CollectSpec collect_spec(const PipelineConfig& c, std::size_t jobs = 1) {
    CollectSpec s;
    s.problem = c.problem;
    s.evolver = c.evolver;
    s.evolver_config = c.evolver_config();
    s.dims = c.dims;
    s.k = c.k;
    s.termination = {c.epsilon_collect, c.max_generations};
    s.seed = c.seed;
    s.jobs = jobs;
    return s;
}

inline ValidateSpec validate_spec(const PipelineConfig& c, std::size_t n, std::size_t jobs = 1) {
    ValidateSpec s;
    s.problem = c.problem;
    s.evolver = c.evolver;
    s.evolver_config = c.evolver_config();
    s.n = n;
    s.epsilon = c.epsilon;
    s.runs = c.runs;
    s.budget = c.validation_budget;
    s.seed = c.validation_seed;
    s.jobs = jobs;
    return s;
}

/// Output directory: explicit value, else $EFHT_OUT_DIR, else the working directory.
inline std::string output_dir(const std::optional<std::string>& explicit_dir = std::nullopt) {
    if (explicit_dir && !explicit_dir->empty()) return *explicit_dir;
    if (const char* env = std::getenv("EFHT_OUT_DIR"); env && *env) return env;
    return ".";
}

}  // namespace efht
