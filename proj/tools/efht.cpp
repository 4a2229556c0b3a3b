// efht: staged command-line front end for expected-first-hitting-time bound
// estimation. Every stage reads and writes plain CSV/JSON artifacts.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "efht/efht.hpp"

namespace fs = std::filesystem;
using namespace efht;

namespace {

struct Overrides {
    std::optional<std::string> config_file;
    std::optional<std::string> problem, evolver;
    std::vector<std::size_t> dims;
    std::optional<std::size_t> k, pop_size, runs;
    std::optional<double> epsilon, epsilon_collect, span;
    std::optional<long> max_generations, validation_budget;
    std::optional<std::uint64_t> seed, validation_seed;
    bool enforce_lower_bound = false;
};

struct Globals {
    std::optional<std::string> out_dir;
    std::size_t jobs = default_jobs();
};

/// Fields the user set explicitly, from --config plus command-line overrides.
json user_fields(const Overrides& o) {
    json j = o.config_file ? read_json(*o.config_file) : json::object();
    if (!j.is_object()) throw std::invalid_argument(*o.config_file + ": expected a JSON object");
    if (o.problem) j["problem"] = *o.problem;
    if (o.evolver) j["evolver"] = *o.evolver;
    if (!o.dims.empty()) j["dims"] = o.dims;
    if (o.k) j["k"] = *o.k;
    if (o.pop_size) j["pop_size"] = *o.pop_size;
    if (o.runs) j["runs"] = *o.runs;
    if (o.epsilon) j["epsilon"] = *o.epsilon;
    if (o.epsilon_collect) j["epsilon_collect"] = *o.epsilon_collect;
    if (o.span) j["span"] = *o.span;
    if (o.max_generations) j["max_generations"] = *o.max_generations;
    if (o.validation_budget) j["validation_budget"] = *o.validation_budget;
    if (o.seed) j["seed"] = *o.seed;
    if (o.validation_seed) j["validation_seed"] = *o.validation_seed;
    if (o.enforce_lower_bound) j["enforce_lower_bound"] = true;
    return j;
}

/// Rejects an input whose metadata disagrees with an explicitly requested
/// setting, naming the offending field.
void guard(const json& user, const json& input_meta, const std::string& input_name,
           std::initializer_list<const char*> fields) {
    for (const char* f : fields) {
        if (!user.contains(f) || !input_meta.contains(f)) continue;
        if (user.at(f) != input_meta.at(f))
            throw std::invalid_argument("metadata mismatch: " + std::string(f) + " (requested " + user.at(f).dump() +
                                        ", " + input_name + " has " + input_meta.at(f).dump() + ")");
    }
}

/// Same check between two artifacts.
void guard_pair(const json& a, const std::string& a_name, const json& b, const std::string& b_name,
                std::initializer_list<const char*> fields) {
    for (const char* f : fields) {
        if (!a.contains(f) || !b.contains(f)) continue;
        const auto& va = a.at(f);
        const auto& vb = b.at(f);
        const bool equal = va.is_number() && vb.is_number()
                               ? detail::same_epsilon(va.get<double>(), vb.get<double>())
                               : va == vb;
        if (!equal)
            throw std::invalid_argument("metadata mismatch: " + std::string(f) + " (" + a_name + " has " + va.dump() +
                                        ", " + b_name + " has " + vb.dump() + ")");
    }
}

/// Effective config: the config chained from an input artifact (if any),
/// patched with the user's explicit fields.
PipelineConfig effective_config(const json& user, const json& chained = json()) {
    json merged = chained.is_object() ? chained : json::object();
    for (auto it = user.begin(); it != user.end(); ++it) merged[it.key()] = it.value();
    return resolve(config_from_json(merged));
}

json chained_config(const json& meta) { return meta.contains("config") ? meta.at("config") : json(); }

fs::path output_path(const Globals& g, const std::optional<std::string>& explicit_out, const std::string& name) {
    if (explicit_out) return *explicit_out;
    return fs::path(output_dir(g.out_dir)) / name;
}

void wrote(const fs::path& p) { std::cout << "wrote " << p.string() << "\n"; }

// ---------------------------------------------------------------- stages

void run_collect(const Globals& g, const Overrides& o, const std::optional<std::string>& out) {
    const auto cfg = effective_config(user_fields(o));
    const auto set = collect(collect_spec(cfg, g.jobs));
    const auto path = output_path(g, out, "samples.csv");
    write_atomic(path, samples_to_csv(set, {{"config", to_json(cfg)}}));
    std::cout << set.samples.size() << " samples over " << cfg.dims.size() << " dimensions\n";
    wrote(path);
}

void report_shortfall(const SelectedSamples& sel) {
    for (const auto& d : sel.dims)
        if (d.shortfall())
            std::cerr << "note: n = " << d.n << " yielded " << d.selected << " of " << d.target_m << " points\n";
}

void run_select(const Globals& g, const Overrides& o, const std::string& in, const std::optional<std::string>& out) {
    const json user = user_fields(o);
    const auto loaded = samples_from_csv(read_text(in), in);
    guard(user, loaded.meta, in, {"problem", "evolver", "epsilon_collect"});
    const auto cfg = effective_config(user, chained_config(loaded.meta));
    const auto sel = select(loaded.set, {cfg.span});
    report_shortfall(sel);
    const auto path = output_path(g, out, "selected.csv");
    write_atomic(path, selected_to_csv(sel, {{"config", to_json(cfg)}}));
    wrote(path);
}

/// Accepts either a selection or raw samples (selected on the fly).
LoadedSelected load_selection(const std::string& in, const json& user, PipelineConfig& cfg) {
    const auto text = read_text(in);
    if (is_samples_csv(text)) {
        const auto loaded = samples_from_csv(text, in);
        guard(user, loaded.meta, in, {"problem", "evolver", "epsilon_collect"});
        cfg = effective_config(user, chained_config(loaded.meta));
        LoadedSelected out;
        out.sel = select(loaded.set, {cfg.span});
        report_shortfall(out.sel);
        out.meta = loaded.meta;
        return out;
    }
    auto loaded = selected_from_csv(text, in);
    guard(user, loaded.meta, in, {"problem", "evolver", "epsilon_collect"});
    cfg = effective_config(user, chained_config(loaded.meta));
    return loaded;
}

void run_fit(const Globals& g, const Overrides& o, const std::string& in, const std::optional<std::string>& out) {
    const json user = user_fields(o);
    PipelineConfig cfg;
    const auto loaded = load_selection(in, user, cfg);
    const FitParams fp = fit_selected(loaded.sel, cfg);
    json j = to_json(fp);
    j["source"] = to_json(loaded.sel.source);
    j["config"] = to_json(cfg);
    const auto path = output_path(g, out, "fit.json");
    write_atomic(path, dump(j));
    std::printf("%s  (R^2 = %.3f, kappa = %zu, violation %.2f)\n", expression_string(fp).c_str(), fp.r2, fp.kappa,
                fp.violation_fraction);
    wrote(path);
}

void run_validate(const Globals& g, const Overrides& o, const std::vector<std::size_t>& ns,
                  const std::optional<std::string>& out) {
    const auto cfg = effective_config(user_fields(o));
    const auto dims = ns.empty() ? cfg.dims : ns;
    if (out && dims.size() != 1) throw std::invalid_argument("validate: --out needs exactly one --n");
    for (auto n : dims) {
        const auto st = measure_fht(validate_spec(cfg, n, g.jobs));
        json j = to_json(st);
        j["config"] = to_json(cfg);
        const auto path = output_path(g, out, "stats_n" + std::to_string(n) + ".json");
        write_atomic(path, dump(j));
        std::printf("n = %zu: mean %.2f generations (std %.2f), hit rate %.2f\n", n, st.mean, st.std, st.hit_rate);
        wrote(path);
    }
}

void run_bound(const Globals& g, const Overrides& o, const std::string& fit_path, const std::optional<std::string>& stats_path,
               std::optional<std::size_t> n_opt, std::optional<double> x0_opt, const std::optional<std::string>& out) {
    const json user = user_fields(o);
    const json fit_json = read_json(fit_path);
    const FitParams fp = fit_from_json(fit_json);
    const json fit_cfg = chained_config(fit_json);
    guard(user, fit_cfg, fit_path, {"problem", "evolver"});
    const auto cfg = effective_config(user, fit_cfg);

    BoundEstimate b;
    json verdicts;
    if (stats_path) {
        const json stats_json = read_json(*stats_path);
        guard_pair(fit_cfg, fit_path, stats_json, *stats_path, {"problem", "evolver"});
        guard(user, stats_json, *stats_path, {"epsilon"});
        RunStats st = stats_from_json(stats_json);
        if (n_opt && *n_opt != st.n) throw std::invalid_argument("metadata mismatch: n (requested " + std::to_string(*n_opt) +
                                                                 ", " + *stats_path + " has " + std::to_string(st.n) + ")");
        if (x0_opt) st.mean_x0 = *x0_opt;
        b = bound_for(fp, st);
        verdicts["generations"] = to_json(check_bound(b, st, Unit::generations));
        verdicts["evaluations"] = to_json(check_bound(b, st, Unit::evaluations));
    } else {
        if (!n_opt || !x0_opt) throw std::invalid_argument("bound: give --stats, or both --n and --x0");
        const Problem problem(parse_problem_id(cfg.problem), *n_opt);
        const auto batch = make_evolver(cfg.evolver, problem, cfg.evolver_config())->batch_size();
        b = efht_upper_closed(fp, *n_opt, *x0_opt, cfg.epsilon, batch);
        b.problem = cfg.problem;
        b.evolver = cfg.evolver;
    }
    json j = to_json(b);
    if (!verdicts.is_null()) j["verdict"] = verdicts;
    j["config"] = to_json(cfg);
    const auto path = output_path(g, out, "bound_n" + std::to_string(b.n) + ".json");
    write_atomic(path, dump(j));
    std::printf("n = %zu: bound %.4g generations (%.4g evaluations), %s\n", b.n, b.value, b.value_evaluations,
                b.complexity.c_str());
    if (!verdicts.is_null()) std::printf("verdict: %s\n", verdicts["evaluations"]["verdict"].get<std::string>().c_str());
    wrote(path);
}

void run_compare(const Globals& g, const std::vector<std::string>& bound_paths, const std::vector<std::string>& stats_paths,
                 const std::optional<std::string>& out) {
    if (bound_paths.size() != stats_paths.size())
        throw std::invalid_argument("compare: give one --stats per --bound, in the same order");
    std::vector<BoundEstimate> bounds;
    std::vector<RunStats> stats;
    for (std::size_t i = 0; i < bound_paths.size(); ++i) {
        const json bj = read_json(bound_paths[i]);
        const json sj = read_json(stats_paths[i]);
        guard_pair(bj, bound_paths[i], sj, stats_paths[i], {"problem", "evolver", "n", "epsilon"});
        bounds.push_back(bound_from_json(bj));
        stats.push_back(stats_from_json(sj));
    }
    const auto rep = compare_algorithms(bounds, stats);
    const auto path = output_path(g, out, "compare.json");
    write_atomic(path, dump(to_json(rep)));
    for (const auto& e : rep.entries)
        std::printf("%-8s bound %.4g (rank %zu)  mean %.4g (rank %zu)\n", e.evolver.c_str(), e.bound, e.bound_rank,
                    e.empirical_mean, e.empirical_rank);
    std::cout << (rep.consistent ? "consistent" : "inconsistent") << "\n";
    wrote(path);
}

void run_stability(const Globals& g, const Overrides& o, const std::vector<std::string>& fit_paths, std::size_t trials,
                   const std::optional<std::string>& out) {
    std::vector<FitParams> fits;
    json cfg_json;
    if (!fit_paths.empty()) {
        if (trials) throw std::invalid_argument("stability: use either --fits or --trials");
        for (const auto& p : fit_paths) fits.push_back(fit_from_json(read_json(p)));
    } else {
        if (trials < 2) throw std::invalid_argument("stability: give --fits or --trials of at least 2");
        const auto cfg = effective_config(user_fields(o));
        cfg_json = to_json(cfg);
        for (std::size_t t = 0; t < trials; ++t) {
            auto c = cfg;
            c.seed = cfg.seed + t;
            fits.push_back(estimate(c, g.jobs).fit);
            std::printf("trial %zu: %s  (R^2 = %.3f)\n", t + 1, expression_string(fits.back()).c_str(), fits.back().r2);
        }
    }
    const auto rep = stability_cv(fits);
    json j = to_json(rep);
    if (!cfg_json.is_null()) j["config"] = cfg_json;
    const auto path = output_path(g, out, "stability.json");
    write_atomic(path, dump(j));
    std::printf("CV(1/A) = %.3f  CV(d) = %.3f over %zu trials\n", rep.cv_coefficient, rep.cv_exponent, rep.trials);
    wrote(path);
}

void run_report(const Globals& g, const std::vector<std::string>& fit_paths, const std::vector<std::string>& stats_paths,
                const std::string& unit_name, const std::optional<std::string>& out) {
    if (fit_paths.size() != stats_paths.size())
        throw std::invalid_argument("report: give one --stats per --fit, in the same order");
    const Unit unit = unit_name == "generations" ? Unit::generations : Unit::evaluations;
    std::string text;
    std::string rows;
    for (std::size_t i = 0; i < fit_paths.size(); ++i) {
        const json fj = read_json(fit_paths[i]);
        const json sj = read_json(stats_paths[i]);
        guard_pair(chained_config(fj), fit_paths[i], sj, stats_paths[i], {"problem", "evolver"});
        const FitParams fp = fit_from_json(fj);
        const RunStats st = stats_from_json(sj);
        const auto b = bound_for(fp, st);
        const auto check = check_bound(b, st, unit);
        char note[512];
        std::snprintf(note, sizeof note,
                      "# %s / %s: n = %zu, eps = %g, X0 = %.4g (mean initial IGD), runs = %zu, budget = %ld generations, "
                      "hit rate = %.2f, unit = %s, verdict = %s\n",
                      st.problem.c_str(), st.evolver.c_str(), st.n, st.epsilon, st.mean_x0, st.runs, st.budget, st.hit_rate,
                      to_string(unit), to_string(check.verdict));
        text += note;
        rows += report_row(b, st, unit) + "\n";
    }
    text += "expression | St.D. | Mean | Estimation | R²\n" + rows;
    std::cout << text;
    const auto path = output_path(g, out, "report.txt");
    write_atomic(path, text);
    wrote(path);
}

void run_plotdata(const Globals& g, const std::string& fit_path, const std::string& selected_path, std::size_t res) {
    const FitParams fp = fit_from_json(read_json(fit_path));
    const auto sel = selected_from_csv(read_text(selected_path), selected_path);
    const auto dir = fs::path(output_dir(g.out_dir));
    write_atomic(dir / "surface_grid.csv", surface_grid_csv(fp, sel.sel.points, res));
    write_atomic(dir / "scatter.csv", scatter_csv(sel.sel.points));
    wrote(dir / "surface_grid.csv");
    wrote(dir / "scatter.csv");
}

void run_front(const Globals& g, const Overrides& o, std::size_t n, std::size_t size, const std::optional<std::string>& out) {
    if (!o.problem) throw std::invalid_argument("front: --problem is required");
    const Problem p(parse_problem_id(*o.problem), n);
    const auto front = size ? reference_front(p, size) : reference_front(p);
    const auto path = output_path(g, out, "front_" + *o.problem + ".csv");
    write_atomic(path, front_to_csv(front, *o.problem));
    wrote(path);
}

void add_config_options(CLI::App& app, Overrides& o) {
    app.add_option("--config", o.config_file, "JSON pipeline config")->check(CLI::ExistingFile);
    app.add_option("--problem", o.problem, "problem id (zdt1..zdt6, dtlz1..dtlz6, oneminmax)");
    app.add_option("--evolver", o.evolver, "evolver id (nsga2, moead)");
    app.add_option("--dims", o.dims, "dimension set, comma separated")->delimiter(',');
    app.add_option("--k", o.k, "probes per generation");
    app.add_option("--pop", o.pop_size, "population size");
    app.add_option("--runs", o.runs, "validation runs");
    app.add_option("--eps", o.epsilon, "target precision for bounds and validation");
    app.add_option("--eps-collect", o.epsilon_collect, "collection stop precision (default: --eps)");
    app.add_option("--span", o.span, "LOESS span");
    app.add_option("--max-generations", o.max_generations, "collection budget (default 100 n)");
    app.add_option("--budget", o.validation_budget, "validation budget in generations (default 100 n)");
    app.add_option("--seed", o.seed, "collection seed");
    app.add_option("--validation-seed", o.validation_seed, "validation seed");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Experimental upper bounds on the expected first hitting time of MOEAs"};
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    Overrides o;
    std::optional<std::string> out;
    app.add_option("--out-dir", g.out_dir, "output directory (default: $EFHT_OUT_DIR, else .)");
    app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("-o,--out", out, "output file (overrides the default name)");
    add_config_options(app, o);

    auto* collect_cmd = app.add_subcommand("collect", "run the evolver with per-generation gain probes");

    std::string in;
    auto* select_cmd = app.add_subcommand("select", "adaptive sample selection");
    select_cmd->add_option("--in", in, "samples CSV")->required()->check(CLI::ExistingFile);

    auto* fit_cmd = app.add_subcommand("fit", "fit the gain surface");
    fit_cmd->add_option("--in", in, "selected or samples CSV")->required()->check(CLI::ExistingFile);
    fit_cmd->add_flag("--enforce-lower-bound", o.enforce_lower_bound, "shrink A until the surface lies below every gain");

    std::vector<std::size_t> ns;
    auto* validate_cmd = app.add_subcommand("validate", "measure empirical first hitting times");
    validate_cmd->add_option("--n", ns, "dimensions to validate (default: config dims)")->delimiter(',');

    std::string fit_path;
    std::optional<std::string> stats_path;
    std::optional<std::size_t> n_opt;
    std::optional<double> x0_opt;
    auto* bound_cmd = app.add_subcommand("bound", "evaluate the bound for one setting");
    bound_cmd->add_option("--fit", fit_path, "fit JSON")->required()->check(CLI::ExistingFile);
    bound_cmd->add_option("--stats", stats_path, "validation stats JSON (supplies n, X0, eps)")->check(CLI::ExistingFile);
    bound_cmd->add_option("--n", n_opt, "dimension");
    bound_cmd->add_option("--x0", x0_opt, "initial IGD X0");

    std::vector<std::string> bound_paths, stats_paths, fit_paths;
    auto* compare_cmd = app.add_subcommand("compare", "bound ranking vs empirical ranking");
    compare_cmd->add_option("--bound", bound_paths, "bound JSON per algorithm")->required()->check(CLI::ExistingFile);
    compare_cmd->add_option("--stats", stats_paths, "stats JSON per algorithm")->required()->check(CLI::ExistingFile);

    std::size_t trials = 0;
    auto* stability_cmd = app.add_subcommand("stability", "coefficient of variation over repeated estimations");
    stability_cmd->add_option("--fits", fit_paths, "existing fit JSON files")->check(CLI::ExistingFile);
    stability_cmd->add_option("--trials", trials, "re-run the estimation this many times (seeds seed, seed+1, ...)");

    std::string unit = "evaluations";
    auto* report_cmd = app.add_subcommand("report", "render table rows");
    report_cmd->add_option("--fit", fit_paths, "fit JSON")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--stats", stats_paths, "stats JSON")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--unit", unit, "evaluations or generations")
        ->check(CLI::IsMember({"evaluations", "generations"}));

    std::string selected_path;
    std::size_t res = 50;
    auto* plot_cmd = app.add_subcommand("plotdata", "surface grid and scatter for plotting");
    plot_cmd->add_option("--fit", fit_path, "fit JSON")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--selected", selected_path, "selected CSV")->required()->check(CLI::ExistingFile);
    plot_cmd->add_option("--res", res, "grid resolution per axis");

    std::size_t front_n = 0, front_size = 0;
    auto* front_cmd = app.add_subcommand("front", "export a reference front");
    front_cmd->add_option("--n", front_n, "dimension")->required();
    front_cmd->add_option("--size", front_size, "number of points (default per problem)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*collect_cmd) run_collect(g, o, out);
        else if (*select_cmd) run_select(g, o, in, out);
        else if (*fit_cmd) run_fit(g, o, in, out);
        else if (*validate_cmd) run_validate(g, o, ns, out);
        else if (*bound_cmd) run_bound(g, o, fit_path, stats_path, n_opt, x0_opt, out);
        else if (*compare_cmd) run_compare(g, bound_paths, stats_paths, out);
        else if (*stability_cmd) run_stability(g, o, fit_paths, trials, out);
        else if (*report_cmd) run_report(g, fit_paths, stats_paths, unit, out);
        else if (*plot_cmd) run_plotdata(g, fit_path, selected_path, res);
        else if (*front_cmd) run_front(g, o, front_n, front_size, out);
    } catch (const std::exception& e) {
        std::cerr << "efht: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
