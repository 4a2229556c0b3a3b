#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "efht/rng.hpp"
#include "efht/types.hpp"

namespace efht {

enum class ProblemId { zdt1, zdt2, zdt3, zdt4, zdt6, dtlz1, dtlz2, dtlz3, dtlz5, dtlz6, oneminmax };

inline constexpr ProblemId all_problems[] = {ProblemId::zdt1,  ProblemId::zdt2,  ProblemId::zdt3,  ProblemId::zdt4,
                                             ProblemId::zdt6,  ProblemId::dtlz1, ProblemId::dtlz2, ProblemId::dtlz3,
                                             ProblemId::dtlz5, ProblemId::dtlz6, ProblemId::oneminmax};

inline std::string_view to_string(ProblemId id) {
    switch (id) {
        case ProblemId::zdt1: return "zdt1";
        case ProblemId::zdt2: return "zdt2";
        case ProblemId::zdt3: return "zdt3";
        case ProblemId::zdt4: return "zdt4";
        case ProblemId::zdt6: return "zdt6";
        case ProblemId::dtlz1: return "dtlz1";
        case ProblemId::dtlz2: return "dtlz2";
        case ProblemId::dtlz3: return "dtlz3";
        case ProblemId::dtlz5: return "dtlz5";
        case ProblemId::dtlz6: return "dtlz6";
        case ProblemId::oneminmax: return "oneminmax";
    }
    return "?";
}

inline ProblemId parse_problem_id(std::string_view s) {
    for (auto id : all_problems)
        if (to_string(id) == s) return id;
    throw std::invalid_argument("unknown problem id '" + std::string(s) + "'");
}

inline bool is_zdt(ProblemId id) {
    return id == ProblemId::zdt1 || id == ProblemId::zdt2 || id == ProblemId::zdt3 || id == ProblemId::zdt4 ||
           id == ProblemId::zdt6;
}

inline bool is_dtlz(ProblemId id) { return !is_zdt(id) && id != ProblemId::oneminmax; }

/// Objective vectors sampled on a problem's analytic Pareto front.
struct ReferenceFront {
    std::vector<Vector> points;
    ProblemId source{};

    std::size_t size() const { return points.size(); }
    std::size_t objectives() const { return points.empty() ? 0 : points.front().size(); }
};

/// A box-constrained continuous MOP. Value type; evaluation is a pure function.
class Problem {
public:
    Problem(ProblemId id, std::size_t n) : id_(id), n_(n) {
        const std::size_t min_n = is_dtlz(id) ? 3 : (is_zdt(id) ? 2 : 1);
        if (n < min_n)
            throw std::invalid_argument(std::string(to_string(id)) + " needs at least " + std::to_string(min_n) +
                                        " decision variables, got " + std::to_string(n));
        lower_.assign(n, 0.0);
        upper_.assign(n, 1.0);
        if (id == ProblemId::zdt4) {
            std::fill(lower_.begin() + 1, lower_.end(), -5.0);
            std::fill(upper_.begin() + 1, upper_.end(), 5.0);
        }
    }

    ProblemId id() const { return id_; }
    std::size_t n() const { return n_; }
    std::size_t m() const { return is_dtlz(id_) ? 3 : 2; }
    const Vector& lower() const { return lower_; }
    const Vector& upper() const { return upper_; }

    Vector evaluate(std::span<const double> x) const;

private:
    ProblemId id_;
    std::size_t n_;
    Vector lower_;
    Vector upper_;
};

inline std::pair<Vector, Vector> decision_bounds(const Problem& p) { return {p.lower(), p.upper()}; }

namespace detail {

constexpr double pi = std::numbers::pi;

inline double zdt_g_linear(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) s += x[i];
    return 1.0 + 9.0 * s / static_cast<double>(x.size() - 1);
}

inline double dtlz_g_rastrigin(std::span<const double> xm) {
    double s = 0.0;
    for (double v : xm) s += (v - 0.5) * (v - 0.5) - std::cos(20.0 * pi * (v - 0.5));
    return 100.0 * (static_cast<double>(xm.size()) + s);
}

inline double dtlz_g_sphere(std::span<const double> xm) {
    double s = 0.0;
    for (double v : xm) s += (v - 0.5) * (v - 0.5);
    return s;
}

inline Vector dtlz_spherical(double theta1, double theta2, double radius) {
    return {radius * std::cos(theta1) * std::cos(theta2), radius * std::cos(theta1) * std::sin(theta2),
            radius * std::sin(theta1)};
}

}  // namespace detail

inline Vector Problem::evaluate(std::span<const double> x) const {
    using detail::pi;
    if (x.size() != n_)
        throw std::invalid_argument("dimension mismatch: expected " + std::to_string(n_) + " variables, got " +
                                    std::to_string(x.size()));
    for (std::size_t i = 0; i < n_; ++i)
        if (!(x[i] >= lower_[i] && x[i] <= upper_[i]))
            throw std::invalid_argument("decision variable " + std::to_string(i) + " out of bounds");

    switch (id_) {
        case ProblemId::zdt1: {
            const double g = detail::zdt_g_linear(x);
            return {x[0], g * (1.0 - std::sqrt(x[0] / g))};
        }
        case ProblemId::zdt2: {
            const double g = detail::zdt_g_linear(x);
            return {x[0], g * (1.0 - (x[0] / g) * (x[0] / g))};
        }
        case ProblemId::zdt3: {
            const double g = detail::zdt_g_linear(x);
            const double r = x[0] / g;
            return {x[0], g * (1.0 - std::sqrt(r) - r * std::sin(10.0 * pi * x[0]))};
        }
        case ProblemId::zdt4: {
            double s = 0.0;
            for (std::size_t i = 1; i < n_; ++i) s += x[i] * x[i] - 10.0 * std::cos(4.0 * pi * x[i]);
            const double g = 1.0 + 10.0 * static_cast<double>(n_ - 1) + s;
            return {x[0], g * (1.0 - std::sqrt(x[0] / g))};
        }
        case ProblemId::zdt6: {
            const double f1 = 1.0 - std::exp(-4.0 * x[0]) * std::pow(std::sin(6.0 * pi * x[0]), 6);
            double s = 0.0;
            for (std::size_t i = 1; i < n_; ++i) s += x[i];
            const double g = 1.0 + 9.0 * std::pow(s / static_cast<double>(n_ - 1), 0.25);
            return {f1, g * (1.0 - (f1 / g) * (f1 / g))};
        }
        case ProblemId::dtlz1: {
            const double g = detail::dtlz_g_rastrigin(x.subspan(2));
            const double h = 0.5 * (1.0 + g);
            return {h * x[0] * x[1], h * x[0] * (1.0 - x[1]), h * (1.0 - x[0])};
        }
        case ProblemId::dtlz2: {
            const double g = detail::dtlz_g_sphere(x.subspan(2));
            return detail::dtlz_spherical(x[0] * pi / 2.0, x[1] * pi / 2.0, 1.0 + g);
        }
        case ProblemId::dtlz3: {
            const double g = detail::dtlz_g_rastrigin(x.subspan(2));
            return detail::dtlz_spherical(x[0] * pi / 2.0, x[1] * pi / 2.0, 1.0 + g);
        }
        case ProblemId::dtlz5:
        case ProblemId::dtlz6: {
            double g = 0.0;
            if (id_ == ProblemId::dtlz5) {
                g = detail::dtlz_g_sphere(x.subspan(2));
            } else {
                for (double v : x.subspan(2)) g += std::pow(v, 0.1);
            }
            const double theta2 = pi / (4.0 * (1.0 + g)) * (1.0 + 2.0 * g * x[1]);
            return detail::dtlz_spherical(x[0] * pi / 2.0, theta2, 1.0 + g);
        }
        case ProblemId::oneminmax: {
            double s = 0.0;
            for (double v : x) s += v;
            return {s, static_cast<double>(n_) - s};
        }
    }
    throw std::logic_error("unhandled problem id");
}

inline constexpr std::size_t default_front_size_2d = 1000;
inline constexpr std::size_t default_front_size_3d = 990;

inline std::size_t default_front_size(const Problem& p) {
    return p.m() == 2 ? default_front_size_2d : default_front_size_3d;
}

/// Simplex-lattice points with h divisions on the (m-1)-simplex, m = 2 or 3.
inline std::vector<Vector> simplex_lattice(std::size_t m, std::size_t h) {
    std::vector<Vector> out;
    const double dh = static_cast<double>(h);
    if (m == 2) {
        for (std::size_t i = 0; i <= h; ++i) out.push_back({i / dh, (h - i) / dh});
    } else if (m == 3) {
        for (std::size_t i = 0; i <= h; ++i)
            for (std::size_t j = 0; j <= h - i; ++j) out.push_back({i / dh, j / dh, (h - i - j) / dh});
    } else {
        throw std::invalid_argument("simplex_lattice supports m = 2 or 3");
    }
    return out;
}

/// Largest lattice resolution whose point count does not exceed `size`
/// (at least one division).
inline std::size_t lattice_divisions(std::size_t m, std::size_t size) {
    std::size_t h = 1;
    auto count = [m](std::size_t hh) { return m == 2 ? hh + 1 : (hh + 1) * (hh + 2) / 2; };
    while (count(h + 1) <= size) ++h;
    return h;
}

inline ReferenceFront reference_front(const Problem& p, std::size_t size) {
    if (size < 2) throw std::invalid_argument("reference front needs at least 2 points");
    ReferenceFront front;
    front.source = p.id();
    auto& pts = front.points;
    const auto steps = static_cast<double>(size - 1);

    switch (p.id()) {
        case ProblemId::zdt1:
        case ProblemId::zdt4:
            for (std::size_t i = 0; i < size; ++i) {
                const double f1 = i / steps;
                pts.push_back({f1, 1.0 - std::sqrt(f1)});
            }
            break;
        case ProblemId::zdt2:
            for (std::size_t i = 0; i < size; ++i) {
                const double f1 = i / steps;
                pts.push_back({f1, 1.0 - f1 * f1});
            }
            break;
        case ProblemId::zdt6: {
            // On the Pareto set g = 1 and x1 is free, so f1 spans [min f1, 1] (min f1 ~ 0.2808).
            double f1_min = 1.0;
            for (int i = 0; i <= 200000; ++i) {
                const double x1 = i / 200000.0;
                f1_min = std::min(f1_min, 1.0 - std::exp(-4.0 * x1) * std::pow(std::sin(6.0 * detail::pi * x1), 6));
            }
            for (std::size_t i = 0; i < size; ++i) {
                const double f1 = f1_min + (1.0 - f1_min) * (i / steps);
                pts.push_back({f1, 1.0 - f1 * f1});
            }
            break;
        }
        case ProblemId::zdt3: {
            // Dense sweep of the g = 1 curve, filtered to its non-dominated subset,
            // then thinned to `size` points evenly by index.
            const std::size_t dense = std::max<std::size_t>(size * 100, 10000);
            std::vector<Vector> nd;
            double best_f2 = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < dense; ++i) {
                const double f1 = i / static_cast<double>(dense - 1);
                const double f2 = 1.0 - std::sqrt(f1) - f1 * std::sin(10.0 * detail::pi * f1);
                if (f2 < best_f2) {
                    nd.push_back({f1, f2});
                    best_f2 = f2;
                }
            }
            const std::size_t take = std::min(size, nd.size());
            for (std::size_t i = 0; i < take; ++i) {
                const auto idx = static_cast<std::size_t>(std::llround(i * (nd.size() - 1) / static_cast<double>(take - 1)));
                pts.push_back(nd[idx]);
            }
            break;
        }
        case ProblemId::dtlz1:
            for (auto w : simplex_lattice(3, lattice_divisions(3, size))) {
                for (auto& v : w) v *= 0.5;
                pts.push_back(std::move(w));
            }
            break;
        case ProblemId::dtlz2:
        case ProblemId::dtlz3:
            for (auto w : simplex_lattice(3, lattice_divisions(3, size))) {
                const double norm = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
                for (auto& v : w) v /= norm;
                pts.push_back(std::move(w));
            }
            break;
        case ProblemId::dtlz5:
        case ProblemId::dtlz6:
            for (std::size_t i = 0; i < size; ++i) {
                const double theta = (detail::pi / 2.0) * (i / steps);
                pts.push_back(detail::dtlz_spherical(theta, detail::pi / 4.0, 1.0));
            }
            break;
        case ProblemId::oneminmax: {
            const auto n = static_cast<double>(p.n());
            for (std::size_t i = 0; i < size; ++i) {
                const double f1 = n * (i / steps);
                pts.push_back({f1, n - f1});
            }
            break;
        }
    }
    return front;
}

inline ReferenceFront reference_front(const Problem& p) { return reference_front(p, default_front_size(p)); }

inline Vector random_point(const Problem& p, Rng& rng) {
    Vector x(p.n());
    for (std::size_t i = 0; i < p.n(); ++i) x[i] = rng.uniform(p.lower()[i], p.upper()[i]);
    return x;
}

/// Uniform decision vectors in the bounds box.
inline std::vector<Vector> random_population(const Problem& p, std::size_t pop_size, std::uint64_t seed) {
    if (pop_size < 2) throw std::invalid_argument("population size must be at least 2");
    Rng rng(seed);
    std::vector<Vector> out;
    out.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) out.push_back(random_point(p, rng));
    return out;
}

}  // namespace efht
