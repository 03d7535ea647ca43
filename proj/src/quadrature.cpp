#include "wavereg/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wavereg {

namespace {

GaussRule build_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = z;
            for (int j = 2; j <= n; ++j) {
                const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p1 = z;
                p0 = 1.0;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) {
                break;
            }
        }
        // Recompute the derivative at the converged root for the weight.
        double p0 = 1.0;
        double p1 = z;
        for (int j = 2; j <= n; ++j) {
            const double p2 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p0) / j;
            p0 = p1;
            p1 = p2;
        }
        if (n == 1) {
            p0 = 1.0;
            p1 = z;
        }
        dp = n * (z * p1 - p0) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule.nodes[i] = -z;
        rule.nodes[n - 1 - i] = z;
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        rule.nodes[m - 1] = 0.0;
    }
    return rule;
}

}  // namespace

std::shared_ptr<const GaussRule> gauss_legendre(int n) {
    if (n < 1) {
        throw std::invalid_argument("gauss_legendre: node count must be >= 1, got " +
                                    std::to_string(n));
    }
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const GaussRule>> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end()) {
        return it->second;
    }
    auto rule = std::make_shared<const GaussRule>(build_rule(n));
    cache.emplace(n, rule);
    return rule;
}

void QuadratureSpec::validate() const {
    if (nodes_t < 4 || nodes_x < 4 || nodes_s < 4) {
        throw std::invalid_argument("QuadratureSpec: all node counts must be >= 4");
    }
    if (cell_nodes < 1) {
        throw std::invalid_argument("QuadratureSpec: cell_nodes must be >= 1");
    }
    if (refinement < 0) {
        throw std::invalid_argument("QuadratureSpec: refinement must be >= 0");
    }
    if (!(rel_tol > 0.0) || !(kernel_rel_tol > 0.0)) {
        throw std::invalid_argument("QuadratureSpec: tolerances must be > 0");
    }
}

}  // namespace wavereg
