#include "catch_amalgamated.hpp"

#include <algorithm>
#include <cmath>

#include "efht/rng.hpp"
#include "efht/surface_fit.hpp"

using namespace efht;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<SelectedPoint> grid(double A, double b, double d, std::initializer_list<std::size_t> dims, int per_dim = 20) {
    std::vector<SelectedPoint> pts;
    for (auto n : dims)
        for (int i = 0; i < per_dim; ++i) {
            const double psi = std::pow(10.0, -2.0 + 2.0 * i / (per_dim - 1));  // 0.01 .. 1
            pts.push_back({n, psi, A * std::pow(psi, b) / std::pow(double(n), d)});
        }
    return pts;
}

std::vector<SelectedPoint> noisy(Rng& rng, double A, double b, double d, double noise) {
    auto pts = grid(A, b, d, {5, 10, 15}, 15);
    for (auto& p : pts) p.gain *= std::pow(10.0, noise * (rng.uniform() - 0.5));
    return pts;
}

double sse_log(const std::vector<SelectedPoint>& pts, double log_a, double b, double d) {
    double s = 0;
    for (const auto& p : pts) {
        const double r = std::log10(p.gain) - (log_a + b * std::log10(p.psi) - d * std::log10(double(p.n)));
        s += r * r;
    }
    return s;
}

FitParams params(double A, double b, double d) {
    FitParams p;
    p.A = A;
    p.b = b;
    p.d = d;
    return p;
}

}  // namespace

TEST_CASE("noise-free power surface is recovered", "[surface_fit]") {
    const auto fp = fit_power_surface(grid(2.0, 1.5, 2.0, {5, 10}));
    CHECK_THAT(fp.A, WithinAbs(2.0, 1e-6));
    CHECK_THAT(fp.b, WithinAbs(1.5, 1e-6));
    CHECK_THAT(fp.d, WithinAbs(2.0, 1e-6));
    CHECK_THAT(fp.r2, WithinAbs(1.0, 1e-12));
    CHECK(fp.kappa == 40);
    CHECK_FALSE(fp.d_fixed);
    CHECK_FALSE(fp.linear_case());
}

TEST_CASE("surface with b on the boundary snaps to exactly 1", "[surface_fit]") {
    const auto fp = fit_power_surface(grid(0.7, 1.0, 1.0, {5, 10}));
    CHECK(fp.b == 1.0);
    CHECK(fp.linear_case());
    CHECK_THAT(fp.A, WithinAbs(0.7, 1e-6));
    CHECK_THAT(fp.d, WithinAbs(1.0, 1e-6));
}

TEST_CASE("exponents below the box are projected onto it", "[surface_fit]") {
    // Underlying b = 0.6 < 1: the constrained optimum sits on b = 1.
    const auto fp = fit_power_surface(grid(0.5, 0.6, 1.0, {5, 10, 20}));
    CHECK(fp.b == 1.0);
    CHECK(fp.d >= fp.box.d_min);
    CHECK(fp.coefficient() >= fp.box.inv_a_min);
    CHECK(fp.coefficient() <= fp.box.inv_a_max * (1 + 1e-12));
}

TEST_CASE("random surfaces inside the box are recovered", "[surface_fit][property]") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const double inv_a = std::pow(10.0, rng.uniform(-2.5, 1.4));
        const double b = rng.uniform(1.05, 3.9);
        const double d = rng.uniform(0.01, 3.9);
        const auto fp = fit_power_surface(grid(1 / inv_a, b, d, {5, 10, 20}));
        CHECK_THAT(fp.coefficient(), WithinRel(inv_a, 1e-6));
        CHECK_THAT(fp.b, WithinAbs(b, 1e-6));
        CHECK_THAT(fp.d, WithinAbs(d, 1e-6));
    }
}

TEST_CASE("the constrained fit is optimal against random feasible candidates", "[surface_fit][property]") {
    Rng rng(18);
    for (int trial = 0; trial < 10; ++trial) {
        const auto pts = noisy(rng, rng.uniform(0.05, 5.0), rng.uniform(0.7, 2.5), rng.uniform(0.0, 2.0), 0.6);
        const auto fp = fit_power_surface(pts);
        const FitBox box;
        const double best = sse_log(pts, std::log10(fp.A), fp.b, fp.d);
        for (int k = 0; k < 2000; ++k) {
            // Half the candidates are near the optimum, half anywhere in the box.
            double la, b, d;
            if (k % 2) {
                la = std::log10(fp.A) + rng.uniform(-0.05, 0.05);
                b = fp.b + rng.uniform(-0.05, 0.05);
                d = fp.d + rng.uniform(-0.05, 0.05);
            } else {
                la = -std::log10(rng.uniform(box.inv_a_min, box.inv_a_max));
                b = rng.uniform(box.b_min, box.b_max);
                d = rng.uniform(box.d_min, box.d_max);
            }
            la = std::clamp(la, -std::log10(box.inv_a_max), -std::log10(box.inv_a_min));
            b = std::clamp(b, box.b_min, box.b_max);
            d = std::clamp(d, box.d_min, box.d_max);
            CHECK(sse_log(pts, la, b, d) >= best * (1 - 1e-10));
        }
    }
}

TEST_CASE("the fit does not depend on point order", "[surface_fit][property]") {
    Rng rng(19);
    auto pts = noisy(rng, 0.3, 1.4, 1.1, 0.4);
    const auto a = fit_power_surface(pts);
    std::reverse(pts.begin(), pts.end());
    const auto b = fit_power_surface(pts);
    CHECK_THAT(b.A, WithinRel(a.A, 1e-9));
    CHECK_THAT(b.b, WithinAbs(a.b, 1e-9));
    CHECK_THAT(b.d, WithinAbs(a.d, 1e-9));
}

TEST_CASE("a single dimension pins d and flags it", "[surface_fit]") {
    const auto fp = fit_power_surface(grid(0.4, 1.3, 0.0, {10}));
    CHECK(fp.d_fixed);
    CHECK(fp.d == 0.0);
    CHECK_THAT(fp.b, WithinAbs(1.3, 1e-9));
    CHECK_THAT(fp.A, WithinRel(0.4, 1e-9));
}

TEST_CASE("fit error paths", "[surface_fit]") {
    CHECK_THROWS_AS(fit_power_surface({{5, 0.1, 0.1}, {5, 0.2, 0.1}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_surface({{5, 0.3, 0.1}, {10, 0.3, 0.2}, {15, 0.3, 0.3}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_surface({{5, 0.1, 0.1}, {5, 0.2, 0.0}, {5, 0.3, 0.2}}), std::invalid_argument);
    CHECK_THROWS_AS(fit_power_surface({{5, 0.1, 0.2}, {5, 0.2, 0.2}, {10, 0.3, 0.2}}), std::domain_error);
}

TEST_CASE("r_squared_log examples", "[surface_fit]") {
    const auto pts = grid(0.3, 1.2, 0.8, {5, 10});
    CHECK_THAT(r_squared_log(pts, params(0.3, 1.2, 0.8)), WithinAbs(1.0, 1e-12));

    double mean = 0;
    for (const auto& p : pts) mean += std::log10(p.gain);
    mean /= pts.size();
    CHECK_THAT(r_squared_log(pts, params(std::pow(10.0, mean), 0.0, 0.0)), WithinAbs(0.0, 1e-12));

    // Observations {1, 10}; with A = 1, b = -1 the predictions are {10, 1}.
    const std::vector<SelectedPoint> swap{{1, 0.1, 1.0}, {1, 1.0, 10.0}};
    CHECK_THAT(r_squared_log(swap, params(1.0, -1.0, 0.0)), WithinAbs(-3.0, 1e-12));

    CHECK_THROWS_AS(r_squared_log({}, params(1, 1, 1)), std::invalid_argument);
    CHECK_THROWS_AS(r_squared_log({{1, 0.5, 2.0}, {1, 0.7, 2.0}}, params(1, 1, 1)), std::domain_error);
}

TEST_CASE("lower_bound_violation examples", "[surface_fit]") {
    Rng rng(20);
    const auto pts = noisy(rng, 0.2, 1.5, 1.0, 0.8);
    const auto base = params(0.2, 1.5, 1.0);
    std::vector<double> ratios;
    for (const auto& p : pts) ratios.push_back(p.gain / predict_gain(base, p.psi, double(p.n)));
    std::sort(ratios.begin(), ratios.end());

    CHECK(lower_bound_violation(pts, params(0.2 * 0.5 * ratios.front(), 1.5, 1.0)) == 0.0);
    CHECK(lower_bound_violation(pts, params(0.2 * 2.0 * ratios.back(), 1.5, 1.0)) == 1.0);
    const double median = ratios[ratios.size() / 2];
    CHECK_THAT(lower_bound_violation(pts, params(0.2 * median, 1.5, 1.0)), WithinAbs(0.5, 0.05));
    CHECK(lower_bound_violation({}, base) == 0.0);
}

TEST_CASE("enforcing the lower bound removes every violation", "[surface_fit]") {
    Rng rng(21);
    const auto pts = noisy(rng, 0.2, 1.5, 1.0, 0.8);
    const auto fp = fit_power_surface(pts);
    REQUIRE(fp.violation_fraction > 0.0);
    const auto lb = enforce_lower_bound(fp, pts);
    CHECK(lb.violation_fraction == 0.0);
    CHECK(lb.lower_bound_shrink < 1.0);
    CHECK(lb.A < fp.A);
    CHECK(lb.b == fp.b);
    CHECK(lb.d == fp.d);
    CHECK(lb.r2 <= fp.r2);
}

TEST_CASE("expression rendering", "[surface_fit]") {
    auto p = params(1 / 1.423, 1.0, 1.234);
    CHECK(expression_string(p) == "1.423 × n^1.234 ln(X0/eps) + 1");
    p = params(0.5, 2.0, 1.0);
    CHECK(expression_string(p) == "2.000 × n^1.000 (eps^-1.000 - X0^-1.000) + 1");
}
