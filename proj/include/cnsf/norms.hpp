#pragma once
//
// Lp / homogeneous Sobolev / Besov norms on grid fields. Lp uses plain
// Riemann quadrature with the pointwise Euclidean magnitude; L-infinity
// oversamples by spectral 2x zero-padding before taking the grid maximum.
//

#include <limits>
#include <optional>

#include "cnsf/lp_partition.hpp"

namespace cnsf {

inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

// Zero-pad a spectral field onto a 2n grid (band-limited interpolation).
inline SpectralVectorField zero_pad_double(const SpectralVectorField& u) {
    const GridSpec& g = u.grid;
    GridSpec g2(2 * g.n(), g.box_length());
    SpectralVectorField out(g2);
    out.divergence_free = u.divergence_free;
    std::size_t n = g.n(), n2 = g2.n();
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        long fi = g.freq(i), fj = g.freq(j), fk = g.freq(k);
        std::size_t i2 = (fi >= 0) ? fi : static_cast<long>(n2) + fi;
        std::size_t j2 = (fj >= 0) ? fj : static_cast<long>(n2) + fj;
        std::size_t k2 = (fk >= 0) ? fk : static_cast<long>(n2) + fk;
        std::size_t idx2 = g2.index(i2, j2, k2);
        out.comp[0][idx2] = u.comp[0][idx];
        out.comp[1][idx2] = u.comp[1][idx];
        out.comp[2][idx2] = u.comp[2][idx];
    });
    (void)n;
    return out;
}

inline double lp_norm(const PhysicalVectorField& u, double p);

// L-infinity via 2x oversampling of the spectral representation.
inline double linf_norm(const SpectralVectorField& u) {
    PhysicalVectorField fine = transform_inverse(zero_pad_double(u));
    return fine.max_abs();
}

inline double lp_norm(const PhysicalVectorField& u, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const GridSpec& g = u.grid;
    if (std::isinf(p)) {
        return linf_norm(transform_forward(u));
    }
    double dv = g.cell_volume();
    double s = pairwise_sum(g.size(), [&](std::size_t idx) {
        double m2 = u.comp[0][idx] * u.comp[0][idx] + u.comp[1][idx] * u.comp[1][idx] +
                    u.comp[2][idx] * u.comp[2][idx];
        if (p == 2.0) return m2;
        if (p == 1.0) return std::sqrt(m2);
        return std::pow(m2, 0.5 * p);
    });
    return std::pow(dv * s, 1.0 / p);
}

// |k|^s multiplier.
inline SpectralVectorField riesz_power(const SpectralVectorField& u, double s) {
    SpectralVectorField out = u;
    if (s == 0.0) return out;
    const GridSpec& g = u.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        double w = std::pow(g.wavevector(i, j, k).norm(), s);
        out.comp[0][idx] *= w;
        out.comp[1][idx] *= w;
        out.comp[2][idx] *= w;
    });
    return out;
}

// Homogeneous Sobolev norm ||u||_{W^{s,p}} = || |D|^s u ||_{Lp}. p = 2 goes
// through Plancherel directly.
inline double sobolev_norm(const SpectralVectorField& u, double s, double p) {
    if (s < 0) throw std::invalid_argument("sobolev_norm: s must be >= 0");
    SpectralVectorField w = riesz_power(u, s);
    if (p == 2.0) return w.l2_norm();
    if (std::isinf(p)) return linf_norm(w);
    return lp_norm(transform_inverse(w), p);
}

// Besov norm: l^r aggregation of 2^{sk} ||P_k u||_{Lp} over the resolvable
// block range. Out-of-range coefficient mass is returned as a diagnostic.
struct BesovResult {
    double value = 0;
    double truncation = 0; // l2 mass of coefficients outside covered annulus
};

inline BesovResult besov_norm(const SpectralVectorField& u, double s, double p, double r) {
    const GridSpec& g = u.grid;
    auto [lo, hi] = LPPartition::resolvable_range(g);

    std::vector<double> weighted;
    for (int k = lo; k <= hi; ++k) {
        SpectralVectorField blk = lp_block(u, k).field;
        double np = (p == 2.0) ? blk.l2_norm()
                               : (std::isinf(p) ? linf_norm(blk)
                                                : lp_norm(transform_inverse(blk), p));
        weighted.push_back(std::pow(2.0, s * k) * np);
    }

    BesovResult res;
    if (std::isinf(r)) {
        for (double v : weighted) res.value = std::max(res.value, v);
    } else {
        double acc = pairwise_sum(weighted.size(),
                                  [&](std::size_t i) { return std::pow(weighted[i], r); });
        res.value = std::pow(acc, 1.0 / r);
    }

    // Mass not covered by the resolvable blocks.
    double lo_edge = LPPartition::support_hi * std::pow(2.0, lo - 1);
    double hi_edge = LPPartition::support_lo * std::pow(2.0, hi + 1);
    double l3 = g.box_length() * g.box_length() * g.box_length();
    double trunc = pairwise_sum(g.size(), [&](std::size_t idx) {
        std::size_t n = g.n();
        std::size_t i = idx / (n * n), j = (idx / n) % n, k = idx % n;
        if (idx == 0) return 0.0;
        double rho = g.wavevector(i, j, k).norm();
        if (rho > lo_edge && rho < hi_edge) return 0.0;
        return std::norm(u.comp[0][idx]) + std::norm(u.comp[1][idx]) +
               std::norm(u.comp[2][idx]);
    });
    res.truncation = std::sqrt(l3 * trunc);
    return res;
}

// Bernstein ratio ||P_k u||_p / (2^{3k(1/q - 1/p)} ||P_k u||_q); absent for a
// zero block.
inline std::optional<double> bernstein_check(const SpectralVectorField& u, int k, double q,
                                             double p) {
    if (p < q) throw std::invalid_argument("bernstein_check requires p >= q");
    SpectralVectorField blk = lp_block(u, k).field;
    auto norm_of = [&](double e) {
        return std::isinf(e) ? linf_norm(blk) : lp_norm(transform_inverse(blk), e);
    };
    double nq = norm_of(q);
    if (nq == 0.0) return std::nullopt;
    double np = norm_of(p);
    double invp = std::isinf(p) ? 0.0 : 1.0 / p;
    double invq = std::isinf(q) ? 0.0 : 1.0 / q;
    double scale = std::pow(2.0, 3.0 * k * (invq - invp));
    return np / (scale * nq);
}

} // namespace cnsf
