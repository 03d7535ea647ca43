#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <vector>

namespace wavereg {

/// Node/weight pairs of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const { return nodes.size(); }
};

/// Returns the cached n-point rule. Nodes are ascending; the rule is exact
/// for polynomials of degree 2n-1. Thread-safe.
std::shared_ptr<const GaussRule> gauss_legendre(int n);

/// Node counts and tolerances for the s-integral and the (x, t) integral.
struct QuadratureSpec {
    int nodes_t = 96;
    int nodes_x = 96;
    int nodes_s = 64;
    int cell_nodes = 3;  // per-cell Gauss order for sampled traces
    int refinement = 4;  // maximum number of node doublings
    double rel_tol = 1e-7;          // 2D reconstruction integral
    double kernel_rel_tol = 1e-10;  // inner s-integral of the kernel

    void validate() const;
};

/// Result of an adaptive (doubling) integration.
template <typename T>
struct Integral {
    T value{};
    double magnitude = 0.0;  // integral of |f|, the round-off scale
    int levels = 0;          // doublings performed beyond the first rule
    bool converged = false;
};

/// Integrates f over [a, b] with Gauss-Legendre, doubling the node count
/// from `nodes` until two levels agree to rel_tol (measured against the
/// integral of |f|) or max_levels doublings have been spent.
template <typename T, typename F>
Integral<T> integrate_doubling(F&& f, double a, double b, int nodes, int max_levels,
                               double rel_tol) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (b + a);
    auto once = [&](int n, double& mag) {
        const auto rule = gauss_legendre(n);
        T sum{};
        mag = 0.0;
        for (std::size_t i = 0; i < rule->size(); ++i) {
            const T v = f(mid + half * rule->nodes[i]);
            sum += rule->weights[i] * v;
            mag += rule->weights[i] * std::abs(v);
        }
        mag *= std::abs(half);
        return static_cast<T>(sum * half);
    };

    Integral<T> out;
    double mag = 0.0;
    T prev = once(nodes, mag);
    out.value = prev;
    out.magnitude = mag;
    int n = nodes;
    for (int level = 1; level <= max_levels; ++level) {
        n *= 2;
        T cur = once(n, mag);
        out.value = cur;
        out.magnitude = mag;
        out.levels = level;
        if (std::abs(cur - prev) <= rel_tol * mag) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    return out;
}

}  // namespace wavereg
