#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "efht/sample_selector.hpp"

namespace efht {

/// Box constraints on the fitted surface, expressed on the reported
/// coefficient 1/A and the exponents.
struct FitBox {
    double b_min = 1.0;
    double b_max = 4.0;
    double d_min = 1e-6;
    double d_max = 4.0;
    double inv_a_min = 1e-3;
    double inv_a_max = 30.0;

    bool operator==(const FitBox&) const = default;
};

/// Gain surface f(psi, n) = A psi^b / n^d with quality diagnostics.
struct FitParams {
    double A = 1.0;
    double b = 1.0;
    double d = 0.0;
    double r2 = 0.0;
    std::size_t kappa = 0;
    bool d_fixed = false;            // single dimension: d pinned to 0
    double violation_fraction = 0.0;
    double lower_bound_shrink = 1.0; // factor applied to A by enforce_lower_bound
    FitBox box;

    double coefficient() const { return 1.0 / A; }
    bool linear_case() const { return b == 1.0; }
};

inline double predict_gain(const FitParams& p, double psi, double n) {
    return p.A * std::pow(psi, p.b) / std::pow(n, p.d);
}

/// Exponents within this distance of 1 are treated as the b = 1 case.
inline constexpr double b_snap_tolerance = 1e-9;

namespace detail {

struct BoxSolution {
    std::array<double, 3> theta{};
    double sse = std::numeric_limits<double>::infinity();
    bool ok = false;
};

/// Exact minimiser of ||X theta - y||^2 over a box, by enumerating every
/// assignment of {free, at lower, at upper} to the non-pinned parameters.
/// `pinned[j]` fixes theta_j at `pin_value[j]` outright.
inline BoxSolution solve_box_ls(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, const std::array<double, 3>& lo,
                                const std::array<double, 3>& hi, const std::array<bool, 3>& pinned,
                                const std::array<double, 3>& pin_value) {
    BoxSolution best;
    const double feas_tol = 1e-12;
    for (int code = 0; code < 27; ++code) {
        std::array<int, 3> state{code % 3, (code / 3) % 3, code / 9};  // 0 free, 1 lower, 2 upper
        bool skip = false;
        for (int j = 0; j < 3; ++j)
            if (pinned[j] && state[j] != 0) skip = true;
        if (skip) continue;

        std::array<double, 3> theta{};
        std::vector<int> free_idx;
        for (int j = 0; j < 3; ++j) {
            if (pinned[j])
                theta[j] = pin_value[j];
            else if (state[j] == 1)
                theta[j] = lo[j];
            else if (state[j] == 2)
                theta[j] = hi[j];
            else
                free_idx.push_back(j);
        }
        Eigen::VectorXd rhs = y;
        for (int j = 0; j < 3; ++j)
            if (pinned[j] || state[j] != 0) rhs -= X.col(j) * theta[j];

        if (!free_idx.empty()) {
            Eigen::MatrixXd sub(X.rows(), static_cast<Eigen::Index>(free_idx.size()));
            for (std::size_t c = 0; c < free_idx.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = X.col(free_idx[c]);
            const auto qr = sub.colPivHouseholderQr();
            if (qr.rank() < sub.cols()) continue;
            const Eigen::VectorXd sol = qr.solve(rhs);
            bool feasible = true;
            for (std::size_t c = 0; c < free_idx.size(); ++c) {
                const int j = free_idx[c];
                const double v = sol(static_cast<Eigen::Index>(c));
                const double scale = std::max(1.0, std::abs(v));
                if (v < lo[j] - feas_tol * scale || v > hi[j] + feas_tol * scale) feasible = false;
                theta[j] = std::clamp(v, lo[j], hi[j]);
            }
            if (!feasible) continue;
        }
        Eigen::VectorXd res = y;
        for (int j = 0; j < 3; ++j) res -= X.col(j) * theta[j];
        const double sse = res.squaredNorm();
        if (sse < best.sse) {
            best.theta = theta;
            best.sse = sse;
            best.ok = true;
        }
    }
    return best;
}

}  // namespace detail

/// Modified coefficient of determination on log10 gains. May be negative.
inline double r_squared_log(const std::vector<SelectedPoint>& points, const FitParams& params) {
    if (points.empty()) throw std::invalid_argument("r_squared_log: no points");
    double mean = 0.0;
    for (const auto& p : points) {
        if (!(p.gain > 0.0)) throw std::invalid_argument("r_squared_log: gains must be positive");
        mean += std::log10(p.gain);
    }
    mean /= static_cast<double>(points.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (const auto& p : points) {
        const double pred = predict_gain(params, p.psi, static_cast<double>(p.n));
        if (!(pred > 0.0)) throw std::invalid_argument("r_squared_log: predictions must be positive");
        const double lg = std::log10(p.gain);
        ss_res += (std::log10(pred) - lg) * (std::log10(pred) - lg);
        ss_tot += (lg - mean) * (lg - mean);
    }
    if (ss_tot == 0.0) throw std::domain_error("r_squared_log: all observed gains are equal; R^2 is undefined");
    return 1.0 - ss_res / ss_tot;
}

/// Fraction of points where the surface lies above the observed gain. A point
/// the surface merely touches (to rounding) is not counted.
inline double lower_bound_violation(const std::vector<SelectedPoint>& points, const FitParams& params) {
    if (points.empty()) return 0.0;
    std::size_t above = 0;
    for (const auto& p : points)
        if (predict_gain(params, p.psi, static_cast<double>(p.n)) > p.gain * (1.0 + 1e-12)) ++above;
    return static_cast<double>(above) / static_cast<double>(points.size());
}

/// Rescales A so the surface touches the data from below.
inline FitParams enforce_lower_bound(FitParams params, const std::vector<SelectedPoint>& points) {
    double ratio = std::numeric_limits<double>::infinity();
    for (const auto& p : points) ratio = std::min(ratio, p.gain / predict_gain(params, p.psi, static_cast<double>(p.n)));
    params.A *= ratio;
    params.lower_bound_shrink = ratio;
    params.r2 = r_squared_log(points, params);
    params.violation_fraction = lower_bound_violation(points, params);
    return params;
}

/// Least-squares fit of log10 g = log10 A + b log10 psi - d log10 n under the
/// box constraints. With a single dimension d is unidentifiable and pinned to 0.
inline FitParams fit_power_surface(const std::vector<SelectedPoint>& points, const FitBox& box = {}) {
    if (points.size() < 3) throw std::invalid_argument("fit_power_surface: need at least 3 points");
    bool psi_varies = false, n_varies = false;
    for (const auto& p : points) {
        if (!(p.gain > 0.0) || !(p.psi > 0.0))
            throw std::invalid_argument("fit_power_surface: psi and gain must be positive");
        psi_varies |= p.psi != points.front().psi;
        n_varies |= p.n != points.front().n;
    }
    if (!psi_varies) throw std::invalid_argument("fit_power_surface: degenerate design, all psi values equal");

    const auto rows = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd X(rows, 3);
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& p = points[static_cast<std::size_t>(i)];
        X(i, 0) = 1.0;
        X(i, 1) = std::log10(p.psi);
        X(i, 2) = -std::log10(static_cast<double>(p.n));
        y(i) = std::log10(p.gain);
    }
    // theta = (log10 A, b, d); 1/A in [inv_a_min, inv_a_max] <=> log10 A in [-log10 max, -log10 min].
    const std::array<double, 3> lo{-std::log10(box.inv_a_max), box.b_min, box.d_min};
    const std::array<double, 3> hi{-std::log10(box.inv_a_min), box.b_max, box.d_max};
    std::array<bool, 3> pinned{false, false, !n_varies};
    std::array<double, 3> pin_value{0.0, 0.0, 0.0};

    auto sol = detail::solve_box_ls(X, y, lo, hi, pinned, pin_value);
    if (sol.ok && sol.theta[1] != 1.0 && std::abs(sol.theta[1] - 1.0) <= b_snap_tolerance && box.b_min <= 1.0) {
        pinned[1] = true;
        pin_value[1] = 1.0;
        sol = detail::solve_box_ls(X, y, lo, hi, pinned, pin_value);
    }
    if (!sol.ok) throw std::runtime_error("fit_power_surface: no feasible solution");

    FitParams fp;
    fp.A = std::pow(10.0, sol.theta[0]);
    fp.b = sol.theta[1];
    fp.d = sol.theta[2];
    fp.kappa = points.size();
    fp.d_fixed = !n_varies;
    fp.box = box;
    fp.r2 = r_squared_log(points, fp);
    fp.violation_fraction = lower_bound_violation(points, fp);
    return fp;
}

namespace detail {
inline std::string format(const char* fmt, double a, double b, double c = 0.0, double d = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, fmt, a, b, c, d);
    return buf;
}
}  // namespace detail

/// Renders the bound as a table expression, e.g. `1.423 × n^1.234 ln(X0/eps) + 1`.
inline std::string expression_string(const FitParams& p) {
    if (p.linear_case()) return detail::format("%.3f × n^%.3f ln(X0/eps) + 1", 1.0 / p.A, p.d);
    const double e = p.b - 1.0;
    return detail::format("%.3f × n^%.3f (eps^-%.3f - X0^-%.3f) + 1", 1.0 / (p.A * e), p.d, e, e);
}

}  // namespace efht
