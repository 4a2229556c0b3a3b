#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace efht {

inline double tricube(double u) {
    u = std::abs(u);
    if (u >= 1.0) return 0.0;
    const double c = 1.0 - u * u * u;
    return c * c * c;
}

/// Number of neighbours in each local window: ceil(span * N), at least 3 so a
/// local line always has two points with nonzero weight.
inline std::size_t loess_window(std::size_t count, double span) {
    const auto q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(count) - 1e-12));
    return std::clamp<std::size_t>(q, 3, count);
}

/// Local linear regression with tricube weights (no robustness iterations),
/// evaluated at every input abscissa. Inputs need not be sorted.
inline std::vector<double> loess(const std::vector<double>& x, const std::vector<double>& y, double span) {
    const std::size_t count = x.size();
    if (y.size() != count) throw std::invalid_argument("loess: x and y differ in length");
    if (count < 3) throw std::invalid_argument("loess: needs at least 3 points");
    if (!(span > 0.0 && span <= 1.0)) throw std::invalid_argument("loess: span must lie in (0, 1]");

    const std::size_t q = loess_window(count, span);
    const auto [xmin_it, xmax_it] = std::minmax_element(x.begin(), x.end());
    const double range = *xmax_it - *xmin_it;

    std::vector<double> fitted(count);
    std::vector<double> dist(count);
    std::vector<double> w(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double x0 = x[i];
        for (std::size_t j = 0; j < count; ++j) dist[j] = std::abs(x[j] - x0);
        std::vector<double> sorted = dist;
        std::nth_element(sorted.begin(), sorted.begin() + (q - 1), sorted.end());
        const double h = sorted[q - 1];

        double sw = 0.0, sx = 0.0, sy = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            w[j] = h > 0.0 ? tricube(dist[j] / h) : (dist[j] == 0.0 ? 1.0 : 0.0);
            sw += w[j];
            sx += w[j] * x[j];
            sy += w[j] * y[j];
        }
        const double xbar = sx / sw;
        const double ybar = sy / sw;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t j = 0; j < count; ++j) {
            const double dx = x[j] - xbar;
            sxx += w[j] * dx * dx;
            sxy += w[j] * dx * (y[j] - ybar);
        }
        // Degenerate local design (all weight on one abscissa): fall back to the local mean.
        const bool spread = std::sqrt(sxx / sw) > 1e-12 * std::max(range, 1e-300);
        fitted[i] = spread ? ybar + (sxy / sxx) * (x0 - xbar) : ybar;
    }
    return fitted;
}

}  // namespace efht
