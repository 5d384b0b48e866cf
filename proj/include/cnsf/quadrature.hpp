#pragma once
//
// Gauss-Legendre rules and the tensor spherical quadrature used by the
// whole-space Fourier-integral evaluators. Rule sizes are configurable;
// the polar size grows with the rotation phase |Omega| t, and every
// evaluator reports a halving-test error estimate instead of silently
// accepting an unconverged result.
//

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cnsf/common.hpp"

namespace cnsf {

struct GaussLegendre {
    std::vector<double> node;   // on (-1, 1)
    std::vector<double> weight; // positive

    explicit GaussLegendre(int n) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: n >= 1");
        node.resize(n);
        weight.resize(n);
        for (int i = 0; i < n; ++i) {
            // Newton from the Chebyshev-like initial guess.
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 0; j < n; ++j) {
                    double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
                }
                pp = n * (x * p0 - p1) / (x * x - 1.0);
                double dx = p0 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            node[i] = x;
            weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        }
    }

    // Rule mapped to [a, b].
    void mapped(double a, double b, std::vector<double>& x, std::vector<double>& w) const {
        std::size_t n = node.size();
        x.resize(n);
        w.resize(n);
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = mid + half * node[i];
            w[i] = half * weight[i];
        }
    }
};

// Round a node count up to a small ladder of sizes so the rule cache stays
// bounded while per-point counts vary freely.
inline int quantize_nodes(int n) {
    if (n <= 256) return ((n + 31) / 32) * 32;
    int q = 256;
    while (q < n) q = (q * 5) / 4;
    return q;
}

// Node construction is O(n^2); cache rules per thread.
inline const GaussLegendre& gl_rule(int n) {
    thread_local std::vector<std::unique_ptr<GaussLegendre>> cache;
    if (n < 1) throw std::invalid_argument("gl_rule: n >= 1");
    if (cache.size() <= static_cast<std::size_t>(n)) cache.resize(n + 1);
    if (!cache[n]) cache[n] = std::make_unique<GaussLegendre>(n);
    return *cache[n];
}

// Integrate f over [a, b] with an n-point rule.
template <class F>
double gl_integrate(const F& f, double a, double b, int n) {
    const GaussLegendre& rule = gl_rule(n);
    std::vector<double> x, w;
    rule.mapped(a, b, x, w);
    double acc = pairwise_sum(x.size(), [&](std::size_t i) { return w[i] * f(x[i]); });
    return acc;
}

struct QuadratureSpec {
    int radial = 128;
    int polar = 64;
    int azimuthal = 64;
    double k_max = 0.0;        // 0: choose from the datum/time so the tail is < 1e-14 of peak
    double tolerance = 1e-8;   // halving-test acceptance threshold (relative)

    void validate() const {
        if (radial < 4 || polar < 4 || azimuthal < 4)
            throw std::invalid_argument("quadrature sizes must be >= 4");
        if (k_max < 0) throw std::invalid_argument("quadrature.k_max must be >= 0");
        if (!(tolerance > 0)) throw std::invalid_argument("quadrature.tolerance must be > 0");
    }
};

struct QuadratureFailure : std::runtime_error {
    double error;
    explicit QuadratureFailure(double err)
        : std::runtime_error("quadrature halving test did not converge (relative error " +
                             std::to_string(err) + ")"),
          error(err) {}
};

} // namespace cnsf
