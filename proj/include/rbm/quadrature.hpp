#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rbm {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

// Gauss-Legendre on [-1, 1] by Newton iteration on P_n.
inline QuadratureRule gauss_legendre(std::size_t n)
{
    if (n == 0) throw std::invalid_argument("gauss_legendre: order must be positive");
    QuadratureRule r{std::vector<double>(n), std::vector<double>(n)};
    const double dn = static_cast<double>(n);
    // returns P_n(x) and sets dp = P_n'(x)
    auto legendre = [n, dn](double x, double& dp) {
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= n; ++k) {
            const double dk = static_cast<double>(k);
            const double p2 = ((2.0 * dk - 1.0) * x * p1 - (dk - 1.0) * p0) / dk;
            p0 = p1;
            p1 = p2;
        }
        dp = dn * (x * p1 - p0) / (x * x - 1.0);
        return p1;
    };
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double dx = legendre(x, dp) / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        legendre(x, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

// Composite rule: `panels` equal panels on [lo, hi], `order` nodes each.
inline QuadratureRule composite_gauss_legendre(double lo, double hi, std::size_t panels, std::size_t order)
{
    if (panels == 0 || !(hi > lo)) throw std::invalid_argument("composite_gauss_legendre: bad interval");
    const auto base = gauss_legendre(order);
    QuadratureRule r;
    const double h = (hi - lo) / static_cast<double>(panels);
    for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo + (static_cast<double>(p) + 0.5) * h;
        for (std::size_t k = 0; k < order; ++k) {
            r.nodes.push_back(mid + 0.5 * h * base.nodes[k]);
            r.weights.push_back(0.5 * h * base.weights[k]);
        }
    }
    return r;
}

} // namespace rbm
