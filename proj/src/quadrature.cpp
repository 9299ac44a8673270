#include "slq/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace slq {

static GaussRule compute_gauss(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double t = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * k + 1) * t * p1 - k * p2) / (k + 1);
            }
            dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        rule.nodes[i] = -t;
        rule.nodes[n - 1 - i] = t;
        rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
    return rule;
}

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

std::vector<double> trapezoid_weights(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        double h = nodes[k + 1] - nodes[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    return w;
}

std::vector<double> simpson_weights(std::span<const double> nodes) {
    const std::size_t n = nodes.size();
    std::vector<double> w(n, 0.0);
    if (n < 2) return w;
    std::size_t k = 0;
    while (k + 2 < n) {
        double h = nodes[k + 1] - nodes[k];
        w[k] += h / 3.0;
        w[k + 1] += 4.0 * h / 3.0;
        w[k + 2] += h / 3.0;
        k += 2;
    }
    if (k + 1 < n) { // odd interval count, close with trapezoid
        double h = nodes[k + 1] - nodes[k];
        w[k] += 0.5 * h;
        w[k + 1] += 0.5 * h;
    }
    return w;
}

} // namespace slq
