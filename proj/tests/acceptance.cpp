// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <regex>
#include <string>
#include <vector>

#include "efht/efht.hpp"

using namespace efht;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// ------------------------------------------------------------------ oracles

double brute_igd(const std::vector<Vector>& sols, const std::vector<Vector>& ref) {
    long double total = 0;
    for (const auto& v : ref) {
        long double best = INFINITY;
        for (const auto& u : sols) {
            long double s = 0;
            for (std::size_t k = 0; k < v.size(); ++k) s += (long double)(v[k] - u[k]) * (v[k] - u[k]);
            best = std::min(best, std::sqrt(s));
        }
        total += best;
    }
    return double(total / ref.size());
}

std::vector<std::vector<std::size_t>> peel(const std::vector<Vector>& pts) {
    std::vector<bool> taken(pts.size(), false);
    std::vector<std::vector<std::size_t>> out;
    std::size_t left = pts.size();
    while (left > 0) {
        std::vector<std::size_t> layer;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (taken[i]) continue;
            bool dominated = false;
            for (std::size_t j = 0; j < pts.size() && !dominated; ++j)
                dominated = !taken[j] && dominates(pts[j], pts[i]);
            if (!dominated) layer.push_back(i);
        }
        for (auto i : layer) taken[i] = true;
        left -= layer.size();
        out.push_back(layer);
    }
    return out;
}

std::vector<double> loess_oracle(const std::vector<double>& x, const std::vector<double>& y, double span) {
    const std::size_t n = x.size();
    const std::size_t q = std::max<std::size_t>(3, std::size_t(std::ceil(span * n - 1e-12)));
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> d(n);
        for (std::size_t j = 0; j < n; ++j) d[j] = std::abs(x[j] - x[i]);
        std::vector<double> s = d;
        std::sort(s.begin(), s.end());
        const double h = s[q - 1];
        long double s0 = 0, s1 = 0, s2 = 0, t0 = 0, t1 = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double u = d[j] / h;
            if (u >= 1) continue;
            const long double w = std::pow(1 - u * u * u, 3);
            s0 += w, s1 += w * x[j], s2 += w * x[j] * x[j], t0 += w * y[j], t1 += w * x[j] * y[j];
        }
        const long double det = s0 * s2 - s1 * s1;
        out[i] = double(((s2 * t0 - s1 * t1) + (s0 * t1 - s1 * t0) * x[i]) / det);
    }
    return out;
}

double ecdf_oracle(std::vector<double> v, double r) {
    std::sort(v.begin(), v.end());
    return double(std::upper_bound(v.begin(), v.end(), r) - v.begin()) / double(v.size());
}

// ------------------------------------------------------------------ criteria

Outcome oracle_equivalence() {
    Rng rng(101);
    int igd_ok = 0, sort_ok = 0, loess_ok = 0, ecdf_ok = 0;
    const int instances = 25;
    for (int i = 0; i < instances; ++i) {
        const std::size_t m = 2 + i % 2;
        std::vector<Vector> ref(10 + rng.below(50), Vector(m)), sols(1 + rng.below(30), Vector(m));
        for (auto& v : ref)
            for (auto& x : v) x = rng.uniform();
        for (auto& v : sols)
            for (auto& x : v) x = rng.uniform(0, 2);
        ReferenceFront rf;
        rf.points = ref;
        const double a = igd(sols, rf), b = brute_igd(sols, ref);
        igd_ok += std::abs(a - b) <= 1e-12 * std::max(1.0, b);

        std::vector<Vector> pts(5 + rng.below(40), Vector(m));
        for (auto& v : pts)
            for (auto& x : v) x = double(rng.below(6));
        auto fronts = nondominated_sort(pts);
        for (auto& f : fronts) std::sort(f.begin(), f.end());
        sort_ok += fronts == peel(pts);

        std::vector<double> x(50), y(50);
        for (std::size_t j = 0; j < 50; ++j) {
            x[j] = rng.uniform(0.01, 1);
            y[j] = 0.2 * std::pow(x[j], 1.3) * rng.uniform(0.8, 1.2);
        }
        const auto f = loess(x, y, 0.3), g = loess_oracle(x, y, 0.3);
        bool close = true;
        for (std::size_t j = 0; j < 50; ++j) close &= std::abs(f[j] - g[j]) <= 1e-6;
        loess_ok += close;

        std::vector<double> v(1 + rng.below(100));
        for (auto& e : v) e = double(rng.below(20));
        bool same = true;
        for (double r = -1; r <= 21; r += 0.5) same &= ecdf(v, r) == ecdf_oracle(v, r);
        ecdf_ok += same;
    }
    const bool pass = igd_ok == instances && sort_ok == instances && loess_ok == instances && ecdf_ok == instances;
    return {pass, fmt("igd %d/%d, sort %d/%d, loess %d/%d, ecdf %d/%d", igd_ok, instances, sort_ok, instances, loess_ok,
                      instances, ecdf_ok, instances)};
}

Outcome fit_recovery() {
    Rng rng(202);
    const FitBox box;
    const int trials = 100;
    int ok = 0;
    double worst = 0;
    for (int t = 0; t < trials; ++t) {
        const double inv_a = std::exp(rng.uniform(std::log(box.inv_a_min), std::log(box.inv_a_max)));
        const double b = rng.uniform(box.b_min, box.b_max);
        const double d = rng.uniform(0.05, box.d_max);
        std::vector<SelectedPoint> pts;
        for (std::size_t n : {5u, 10u, 15u})
            for (int i = 0; i < 2 * int(n); ++i) {
                const double psi = std::pow(10.0, -2.0 + 2.0 * i / (2 * n - 1));
                pts.push_back({n, psi, std::pow(psi, b) / (inv_a * std::pow(double(n), d))});
            }
        const auto fp = fit_power_surface(pts, box);
        const double err = std::max({std::abs(fp.coefficient() - inv_a) / inv_a, std::abs(fp.b - b) / b,
                                     std::abs(fp.d - d) / d});
        worst = std::max(worst, err);
        ok += err <= 1e-6 && std::abs(fp.r2 - 1) <= 1e-9;
    }
    return {ok == trials, fmt("%d/%d recovered, worst relative error %.2e", ok, trials, worst)};
}

Outcome bound_consistency() {
    Rng rng(303);
    const int trials = 1000;
    int ok = 0;
    double worst = 0;
    bool unit = true;
    for (int t = 0; t < trials; ++t) {
        FitParams p;
        p.A = std::pow(10.0, rng.uniform(-1.5, 3));
        p.b = t % 5 == 0 ? 1.0 : rng.uniform(1, 4);
        p.d = rng.uniform(0, 4);
        const std::size_t n = 2 + rng.below(40);
        const double x0 = rng.uniform(0.05, 10);
        const double eps = x0 * std::pow(10.0, -rng.uniform(0, 3));
        const double closed = efht_upper_closed(p, n, x0, eps).value;
        const double numeric = efht_upper_numeric(p, n, x0, eps);
        const double rel = std::abs(closed - numeric) / closed;
        worst = std::max(worst, rel);
        ok += rel <= 1e-6;
        unit &= efht_upper_closed(p, n, x0, x0).value == 1.0 && efht_upper_numeric(p, n, x0, x0) == 1.0;
    }
    return {ok == trials && unit,
            fmt("%d/%d within 1e-6 (worst %.2e), eps = X0 gives exactly 1: %s", ok, trials, worst, unit ? "yes" : "no")};
}

PipelineConfig c4_config(const std::string& problem, std::uint64_t seed) {
    PipelineConfig c;
    c.problem = problem;
    c.evolver = "nsga2";
    c.dims = {5, 10};
    c.k = 30;
    c.pop_size = 100;
    c.epsilon = 0.05;
    c.runs = 30;
    c.seed = seed;
    c.validation_seed = 1000 + seed;
    return resolve(c);
}

struct SoundnessRun {
    bool sound = true;
    std::string artifacts;  // every serialized artifact, concatenated
    std::vector<std::string> lines;
};

SoundnessRun soundness_pipeline(std::uint64_t seed) {
    SoundnessRun out;
    for (const std::string problem : {"zdt1", "zdt2"}) {
        const auto c = c4_config(problem, seed);
        const auto e = estimate(c);
        out.artifacts += samples_to_csv(e.samples, {{"config", to_json(c)}});
        out.artifacts += selected_to_csv(e.selected);
        out.artifacts += dump(to_json(e.fit));
        for (auto n : c.dims) {
            const auto st = measure_fht(validate_spec(c, n));
            const auto b = bound_for(e.fit, st);
            out.artifacts += dump(to_json(st)) + dump(to_json(b));
            if (st.infeasible()) {
                out.sound = false;
                out.lines.push_back(fmt("%s n=%zu: no validation run reached eps", problem.c_str(), n));
                continue;
            }
            const auto chk = check_bound(b, st, Unit::evaluations);
            if (chk.verdict == Verdict::violated) out.sound = false;
            out.lines.push_back(fmt("%s n=%zu seed=%llu: %s  R2=%.3f bound=%.3e mean=%.3e evals (ratio %.2f, hit %.2f) -> %s",
                                    problem.c_str(), n, (unsigned long long)seed, expression_string(e.fit).c_str(), chk.r2,
                                    chk.bound, chk.empirical_mean, chk.bound / chk.empirical_mean, st.hit_rate,
                                    to_string(chk.verdict)));
        }
    }
    return out;
}

Outcome end_to_end_soundness(std::string& first_artifacts) {
    std::string detail;
    for (std::uint64_t seed : {1ull, 2ull}) {  // one rerun permitted for a flaky seed
        auto run = soundness_pipeline(seed);
        if (seed == 1) first_artifacts = run.artifacts;
        for (const auto& l : run.lines) std::printf("    %s\n", l.c_str());
        if (run.sound) return {true, fmt("every R2 > 0 bound covers the empirical mean (seed %llu)", (unsigned long long)seed)};
        detail = "a bound with R2 > 0 lies below the empirical mean on seeds 1 and 2";
    }
    return {false, detail};
}

Outcome ranking_consistency() {
    std::vector<BoundEstimate> bounds;
    std::vector<RunStats> stats;
    for (const std::string evolver : {"nsga2", "moead"}) {
        auto c = c4_config("zdt1", 1);
        c.evolver = evolver;
        const auto e = estimate(c);
        stats.push_back(measure_fht(validate_spec(c, 10)));
        bounds.push_back(bound_for(e.fit, stats.back()));
        std::printf("    %s: %s  R2=%.3f bound=%.1f gens, mean=%.1f gens\n", evolver.c_str(),
                    expression_string(e.fit).c_str(), e.fit.r2, bounds.back().value, stats.back().mean);
    }
    const auto rep = compare_algorithms(bounds, stats);
    return {rep.consistent, rep.consistent ? "bound order matches empirical order" : "bound order disagrees with empirical order"};
}

Outcome stability() {
    std::vector<FitParams> fits;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) fits.push_back(estimate(c4_config("zdt1", seed)).fit);
    const auto rep = stability_cv(fits);
    std::string spread;
    for (const auto& f : fits) spread += fmt(" (%.3f, %.3f)", f.coefficient(), f.d);
    std::printf("    (1/A, d) per trial:%s\n", spread.c_str());
    return {rep.cv_coefficient < 0.5 && rep.cv_exponent < 0.5,
            fmt("CV(1/A) = %.3f, CV(d) = %.3f, threshold 0.5", rep.cv_coefficient, rep.cv_exponent)};
}

Outcome oneminmax_sanity() {
    PipelineConfig c;
    c.problem = "oneminmax";
    c.evolver = "nsga2";
    c.dims = {5, 10, 15};
    c.k = 30;
    c = resolve(c);
    const auto fit = estimate(c).fit;
    const std::regex log_form(R"(^\d+\.\d{3} × n\^\d+\.\d{3} ln\(X0/eps\) \+ 1$)");
    FitParams as_linear = fit;
    as_linear.b = 1.0;
    const bool renders = std::regex_match(expression_string(as_linear), log_form) &&
                         (!fit.linear_case() || std::regex_match(expression_string(fit), log_form));
    const bool in_range = fit.d >= 0.5 && fit.d <= 2.5;
    return {in_range && renders, fmt("d = %.3f (b = %.3f, R2 = %.3f), expression %s; b = 1 form %s", fit.d, fit.b, fit.r2,
                                     expression_string(fit).c_str(), expression_string(as_linear).c_str())};
}

Outcome determinism(const std::string& first) {
    const auto again = soundness_pipeline(1).artifacts;
    return {!first.empty() && again == first, fmt("%zu bytes of artifacts, %s", again.size(),
                                                  again == first ? "identical on repeat" : "differ on repeat")};
}

}  // namespace

int main() {
    int failures = 0;
    auto run = [&](int id, double limit_s, const std::function<Outcome()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = limit_s <= 0 || secs < limit_s;
        const bool pass = o.pass && in_time;
        failures += !pass;
        std::printf("criterion %d: %s  %s  [%.1f s%s]\n", id, pass ? "PASS" : "FAIL", o.detail.c_str(), secs,
                    in_time ? "" : ", over time limit");
        std::fflush(stdout);
    };

    std::string artifacts;
    run(1, 10, oracle_equivalence);
    run(2, 5, fit_recovery);
    run(3, 10, bound_consistency);
    run(4, 600, [&] { return end_to_end_soundness(artifacts); });
    run(5, 600, ranking_consistency);
    run(6, 1200, stability);
    run(7, 600, oneminmax_sanity);
    run(8, 0, [&] { return determinism(artifacts); });
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
