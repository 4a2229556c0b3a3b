#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "efht/surface_fit.hpp"

namespace efht {

enum class BoundCase { logarithmic, polynomial };  // b = 1, b > 1

inline const char* to_string(BoundCase c) { return c == BoundCase::logarithmic ? "b=1" : "b>1"; }

/// Upper bound on the expected first hitting time for one (n, X0, eps).
struct BoundEstimate {
    FitParams params;
    std::string problem;
    std::string evolver;
    std::size_t n = 0;
    double x0 = 0.0;
    double epsilon = 0.0;
    double value = 0.0;              // generations
    double value_evaluations = 0.0;  // generations x offspring per generation
    std::size_t offspring_per_generation = 0;
    BoundCase bound_case = BoundCase::logarithmic;
    std::string complexity;
    std::string expression;
};

inline std::string complexity_class(const FitParams& p) {
    if (p.linear_case()) return detail::format("O(n^%.3f ln(X0/eps))", p.d, 0.0);
    return detail::format("O(n^%.3f eps^-%.3f)", p.d, p.b - 1.0);
}

namespace detail {
inline void check_bound_args(const FitParams& p, double x0, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("bound: epsilon must be positive");
    if (epsilon > x0) throw std::invalid_argument("bound: epsilon exceeds X0");
    if (!(p.A > 0.0) || !(p.b >= 1.0)) throw std::invalid_argument("bound: surface must have A > 0 and b >= 1");
}
}  // namespace detail

/// 1 + integral_eps^X0 n^d / (A z^b) dz in closed form.
inline double efht_upper_value(const FitParams& p, double n, double x0, double epsilon) {
    detail::check_bound_args(p, x0, epsilon);
    const double scale = std::pow(n, p.d) / p.A;
    const double log_ratio = std::log(x0 / epsilon);
    if (p.linear_case()) return 1.0 + scale * log_ratio;
    const double e = p.b - 1.0;
    // eps^(1-b) - X0^(1-b) = eps^(1-b) * (1 - (X0/eps)^(1-b)), via expm1 so b -> 1+ stays accurate.
    return 1.0 + scale / e * std::exp(-e * std::log(epsilon)) * -std::expm1(-e * log_ratio);
}

inline BoundEstimate efht_upper_closed(const FitParams& p, std::size_t n, double x0, double epsilon,
                                       std::size_t offspring_per_generation = 100) {
    BoundEstimate est;
    est.params = p;
    est.n = n;
    est.x0 = x0;
    est.epsilon = epsilon;
    est.value = efht_upper_value(p, static_cast<double>(n), x0, epsilon);
    est.offspring_per_generation = offspring_per_generation;
    est.value_evaluations = est.value * static_cast<double>(offspring_per_generation);
    est.bound_case = p.linear_case() ? BoundCase::logarithmic : BoundCase::polynomial;
    est.complexity = complexity_class(p);
    est.expression = expression_string(p);
    return est;
}

/// Same bound by adaptive Gauss-Kronrod quadrature (in log z), relative
/// tolerance 1e-9, recursion depth capped at 12 (the integrand is smooth in log z).
/// Independent of the closed form.
inline double efht_upper_numeric(const FitParams& p, std::size_t n, double x0, double epsilon) {
    detail::check_bound_args(p, x0, epsilon);
    if (epsilon == x0) return 1.0;
    const double nn = static_cast<double>(n);
    auto integrand = [&](double u) {
        const double z = std::exp(u);
        return z / predict_gain(p, z, nn);
    };
    double error = 0.0;
    const double integral = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        integrand, std::log(epsilon), std::log(x0), 12, 1e-9, &error);
    return 1.0 + integral;
}

}  // namespace efht
