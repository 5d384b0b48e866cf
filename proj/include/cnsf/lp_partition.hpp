#pragma once
//
// Homogeneous Littlewood-Paley blocks. The radial profile is built from a
// smooth cutoff S (1 below 3/2, 0 above 8/3) as phi(rho) = S(rho) - S(2 rho),
// so supp phi lies in {3/4 <= rho <= 8/3} and sum_k phi(2^-k rho) telescopes
// to 1 exactly for every rho > 0 (adjacent terms reuse bit-identical cutoff
// values since scaling by 2 is exact).
//

#include <optional>

#include "cnsf/fft.hpp"

namespace cnsf {

namespace detail {

// C-infinity step: 0 for t <= 0, 1 for t >= 1.
inline double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1.0 - t));
    return a / (a + b);
}

} // namespace detail

struct LPPartition {
    static constexpr double support_lo = 0.75;      // 3/4
    static constexpr double support_hi = 8.0 / 3.0; // 8/3

    // Cutoff S: 1 for rho <= 3/2, 0 for rho >= 8/3.
    static double cutoff(double rho) {
        return 1.0 - detail::smooth_step((rho - 1.5) / (support_hi - 1.5));
    }

    static double profile(double rho) { return cutoff(rho) - cutoff(2.0 * rho); }

    // phi(2^-k rho)
    static double block_profile(int k, double rho) {
        return profile(std::ldexp(rho, -k));
    }

    // Resolvable dyadic range for a grid: blocks whose information the grid
    // actually carries. Out-of-range content is reported, never dropped
    // silently.
    static std::pair<int, int> resolvable_range(const GridSpec& g) {
        double kmin = g.k0();
        double kmax = g.k0() * static_cast<double>(g.n() / 2);
        int lo = static_cast<int>(std::ceil(std::log2(kmin * 4.0 / 3.0))) - 1;
        int hi = static_cast<int>(std::floor(std::log2(kmax * 3.0 / 8.0)));
        return {lo, hi};
    }
};

struct BlockResult {
    SpectralVectorField field;
    bool resolvable = true; // false: block entirely outside the grid's annulus
};

// P_k u = F^-1( phi(2^-k |xi|) u^ ).
inline BlockResult lp_block(const SpectralVectorField& u, int k) {
    BlockResult res{SpectralVectorField(u.grid), true};
    const GridSpec& g = u.grid;
    auto [lo, hi] = LPPartition::resolvable_range(g);
    res.resolvable = (k >= lo - 1 && k <= hi + 1);
    res.field.divergence_free = u.divergence_free;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t kk) {
        if (idx == 0) return;
        double rho = g.wavevector(i, j, kk).norm();
        double w = LPPartition::block_profile(k, rho);
        if (w == 0.0) return;
        res.field.comp[0][idx] = w * u.comp[0][idx];
        res.field.comp[1][idx] = w * u.comp[1][idx];
        res.field.comp[2][idx] = w * u.comp[2][idx];
    });
    return res;
}

// Worst-case |sum_k phi(2^-k |xi|) - 1| over nonzero grid modes.
inline double partition_of_unity_defect(const GridSpec& g) {
    std::size_t n = g.n();
    std::vector<double> worst(n, 0.0);
    parallel_for(
        n,
        [&](std::size_t i) {
            double w = 0;
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    double rho = g.wavevector(i, j, k).norm();
                    int kc = static_cast<int>(std::floor(std::log2(rho)));
                    double s = 0;
                    for (int b = kc - 3; b <= kc + 3; ++b)
                        s += LPPartition::block_profile(b, rho);
                    w = std::max(w, std::abs(s - 1.0));
                }
            worst[i] = w;
        },
        2);
    double m = 0;
    for (double v : worst) m = std::max(m, v);
    return m;
}

} // namespace cnsf
