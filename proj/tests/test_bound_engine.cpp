#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>

#include "efht/bound_engine.hpp"
#include "efht/rng.hpp"

using namespace efht;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

FitParams params(double A, double b, double d) {
    FitParams p;
    p.A = A;
    p.b = b;
    p.d = d;
    return p;
}

}  // namespace

TEST_CASE("closed-form bound examples", "[bound_engine]") {
    const double e = std::numbers::e;
    CHECK_THAT(efht_upper_closed(params(1, 1, 0), 7, e * 0.1, 0.1).value, WithinAbs(2.0, 1e-12));
    CHECK(efht_upper_closed(params(3.5, 1, 1.2), 10, 0.4, 0.4).value == 1.0);
    CHECK(efht_upper_closed(params(0.2, 2.5, 0.7), 10, 0.4, 0.4).value == 1.0);
    CHECK_THAT(efht_upper_closed(params(1, 2, 0), 5, 1.0, 0.1).value, WithinAbs(10.0, 1e-12));
    CHECK_THAT(efht_upper_closed(params(2, 1, 1), 10, 1.0, 0.01).value, WithinAbs(1 + 5 * std::log(100.0), 1e-12));
    CHECK_THAT(efht_upper_closed(params(2, 1, 1), 10, 1.0, 0.01).value, WithinAbs(24.026, 5e-4));
}

TEST_CASE("bound estimate records case, complexity and evaluations", "[bound_engine]") {
    const auto lin = efht_upper_closed(params(1 / 1.423, 1, 1.234), 10, 0.8, 0.05, 100);
    CHECK(lin.bound_case == BoundCase::logarithmic);
    CHECK(lin.complexity == "O(n^1.234 ln(X0/eps))");
    CHECK(lin.expression == "1.423 × n^1.234 ln(X0/eps) + 1");
    CHECK(lin.value_evaluations == lin.value * 100);
    CHECK(lin.n == 10);

    const auto poly = efht_upper_closed(params(1, 2, 1), 10, 0.8, 0.05, 91);
    CHECK(poly.bound_case == BoundCase::polynomial);
    CHECK(poly.complexity == "O(n^1.000 eps^-1.000)");
    CHECK(poly.value_evaluations == poly.value * 91);
}

TEST_CASE("complexity strings", "[bound_engine]") {
    CHECK(complexity_class(params(1, 1, 1.234)) == "O(n^1.234 ln(X0/eps))");
    CHECK(complexity_class(params(1, 1, 1.484)) == "O(n^1.484 ln(X0/eps))");
    CHECK(complexity_class(params(1, 2, 1)) == "O(n^1.000 eps^-1.000)");
}

TEST_CASE("numeric quadrature examples", "[bound_engine]") {
    CHECK_THAT(efht_upper_numeric(params(2, 1, 1), 10, 1.0, 0.01), WithinAbs(1 + 5 * std::log(100.0), 1e-6));
    CHECK(efht_upper_numeric(params(2, 1, 1), 10, 0.5, 0.5) == 1.0);
    CHECK_THAT(efht_upper_numeric(params(2, 1.7, 1), 10, 0.5, 0.5 * (1 - 1e-9)), WithinAbs(1.0, 1e-6));
}

TEST_CASE("closed form agrees with numeric quadrature", "[bound_engine][oracle]") {
    Rng rng(40);
    for (int trial = 0; trial < 200; ++trial) {
        const double b = trial % 4 == 0 ? 1.0 : rng.uniform(1.0, 4.0);
        const auto p = params(std::pow(10.0, rng.uniform(-1.5, 3)), b, rng.uniform(0, 3));
        const std::size_t n = 5 + rng.below(26);
        const double x0 = rng.uniform(0.1, 5.0);
        const double eps = x0 * std::pow(10.0, -rng.uniform(0, 3));
        const double closed = efht_upper_closed(p, n, x0, eps).value;
        const double numeric = efht_upper_numeric(p, n, x0, eps);
        INFO("b=" << b << " A=" << p.A << " d=" << p.d << " n=" << n << " x0=" << x0 << " eps=" << eps);
        CHECK_THAT(numeric, WithinRel(closed, 1e-6));
    }
}

TEST_CASE("bound is monotone in its arguments", "[bound_engine][property]") {
    Rng rng(41);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = params(rng.uniform(0.05, 5), trial % 2 ? 1.0 : rng.uniform(1, 3), rng.uniform(0.1, 2));
        const double x0 = rng.uniform(0.5, 2), eps = rng.uniform(0.01, 0.4);
        const double v = efht_upper_value(p, 10, x0, eps);
        CHECK(v >= 1.0);
        CHECK(efht_upper_value(p, 10, x0 * 1.1, eps) > v);
        CHECK(efht_upper_value(p, 10, x0, eps * 0.9) > v);
        CHECK(efht_upper_value(p, 11, x0, eps) > v);
    }
}

TEST_CASE("the b > 1 form converges to the b = 1 form", "[bound_engine][property]") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        const double A = rng.uniform(0.05, 5), d = rng.uniform(0, 2);
        const double x0 = rng.uniform(0.5, 2), eps = rng.uniform(0.01, 0.4);
        const double at_one = efht_upper_value(params(A, 1.0, d), 10, x0, eps);
        const double near_one = efht_upper_value(params(A, 1.0 + 1e-6, d), 10, x0, eps);
        CHECK_THAT(near_one, WithinRel(at_one, 1e-4));
    }
}

TEST_CASE("bound argument errors", "[bound_engine]") {
    CHECK_THROWS_AS(efht_upper_value(params(1, 1, 1), 5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(efht_upper_value(params(1, 1, 1), 5, 0.1, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(efht_upper_value(params(0, 1, 1), 5, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(efht_upper_value(params(1, 0.5, 1), 5, 1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(efht_upper_numeric(params(1, 1, 1), 5, 0.1, 0.2), std::invalid_argument);
    CHECK(std::string(to_string(BoundCase::logarithmic)) == "b=1");
    CHECK(std::string(to_string(BoundCase::polynomial)) == "b>1");
}
