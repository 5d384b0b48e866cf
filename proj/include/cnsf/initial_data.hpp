#pragma once
//
// Divergence-free initial data with controlled moments, deterministic in the
// seed (counter-based RNG keyed by mode/lump index, so thread count and
// iteration order cannot change the field).
//
//  gaussian-divfree     curl of a Gaussian-envelope vector potential; smooth,
//                       localized, mean-free, generic first moments.
//  moment-zero-divfree  curl of a Laplacian-weighted Gaussian potential, odd
//                       about the box center; every first moment of every
//                       component vanishes (the potential integrates to zero).
//  rough-sobolev        random phases with |k|^-(s+3/2) amplitude tail.
//

#include <string>

#include "cnsf/operators.hpp"

namespace cnsf {

enum class DataKind { GaussianDivFree, MomentZeroDivFree, RoughSobolev };

inline DataKind data_kind_from_string(const std::string& s) {
    if (s == "gaussian-divfree") return DataKind::GaussianDivFree;
    if (s == "moment-zero-divfree") return DataKind::MomentZeroDivFree;
    if (s == "rough-sobolev") return DataKind::RoughSobolev;
    throw std::invalid_argument("unknown data.kind '" + s + "'");
}

inline std::string to_string(DataKind k) {
    switch (k) {
        case DataKind::GaussianDivFree: return "gaussian-divfree";
        case DataKind::MomentZeroDivFree: return "moment-zero-divfree";
        default: return "rough-sobolev";
    }
}

struct InitialDataSpec {
    DataKind kind = DataKind::GaussianDivFree;
    std::uint64_t seed = 1;
    double amplitude = 1.0;      // peak velocity magnitude after scaling
    double length_scale = 0.0;   // Gaussian envelope width; default L/16
    double sobolev_index = 0.7;  // rough kind only

    void validate(const GridSpec& grid) const {
        if (!(amplitude > 0)) throw std::invalid_argument("data.amplitude must be > 0");
        double ls = length_scale > 0 ? length_scale : grid.box_length() / 16.0;
        if (!(ls > 0) || ls >= grid.box_length() / 8.0)
            throw std::invalid_argument("data.length_scale must lie in (0, L/8)");
        if (kind == DataKind::RoughSobolev &&
            !(sobolev_index > 0.5 && sobolev_index < 0.9))
            throw std::invalid_argument("data.s must lie in (1/2, 9/10)");
    }
};

namespace detail {

// Curl of a vector potential given on the grid; exactly divergence-free in
// exact arithmetic (k . (k x psi) = 0), residual is rounding noise.
inline SpectralVectorField spectral_curl(const SpectralVectorField& psi) {
    SpectralVectorField out(psi.grid);
    const GridSpec& g = psi.grid;
    const cplx iunit{0.0, 1.0};
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        Vec3 kv = g.wavevector(i, j, k);
        cplx p0 = psi.comp[0][idx], p1 = psi.comp[1][idx], p2 = psi.comp[2][idx];
        out.comp[0][idx] = iunit * (kv.y * p2 - kv.z * p1);
        out.comp[1][idx] = iunit * (kv.z * p0 - kv.x * p2);
        out.comp[2][idx] = iunit * (kv.x * p1 - kv.y * p0);
    });
    out.divergence_free = true;
    return out;
}

} // namespace detail

inline SpectralVectorField generate_initial_data(const InitialDataSpec& spec,
                                                 const GridSpec& grid) {
    spec.validate(grid);
    const double L = grid.box_length();
    const double ls = spec.length_scale > 0 ? spec.length_scale : L / 16.0;
    const Vec3 c = grid.center();

    SpectralVectorField u;

    if (spec.kind == DataKind::RoughSobolev) {
        // Random tangential coefficients with |k|^-(s+3/2) amplitudes.
        // Hermitian symmetry: draw per unordered mode pair via a canonical
        // representative; Nyquist planes lie outside the dealias mask.
        u = SpectralVectorField(grid);
        const double expo = spec.sobolev_index + 1.5;
        std::size_t n = grid.n();
        grid.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
            if (idx == 0 || !grid.dealias_keep(i, j, k)) return;
            long fi = grid.freq(i), fj = grid.freq(j), fk = grid.freq(k);
            // Canonical representative of the +-k pair.
            bool canonical = (fi > 0) || (fi == 0 && fj > 0) || (fi == 0 && fj == 0 && fk > 0);
            std::size_t ci = canonical ? i : (n - i) % n;
            std::size_t cj = canonical ? j : (n - j) % n;
            std::size_t ck = canonical ? k : (n - k) % n;
            std::uint64_t counter = (ci * n + cj) * n + ck;
            CVec3 zeta;
            for (int comp = 0; comp < 3; ++comp) {
                auto [g1, g2] = normal_pair(spec.seed, 8 * counter + 2 * comp);
                zeta[comp] = cplx{g1, g2};
            }
            Vec3 kv = grid.wavevector(i, j, k);
            double kn = kv.norm();
            // Tangential projection.
            cplx dot = (kv.x * zeta[0] + kv.y * zeta[1] + kv.z * zeta[2]) / kv.norm2();
            CVec3 v{zeta[0] - kv.x * dot, zeta[1] - kv.y * dot, zeta[2] - kv.z * dot};
            double amp = std::pow(kn, -expo);
            if (!canonical) {
                // Conjugate of the canonical draw.
                for (auto& z : v) z = std::conj(z);
            }
            u.set(idx, amp * v);
        });
        u.divergence_free = true;
    } else {
        // Vector potential on the grid, then curl.
        PhysicalVectorField psi(grid);
        const int lumps = spec.kind == DataKind::GaussianDivFree ? 2 : 1;
        const bool weighted = spec.kind == DataKind::MomentZeroDivFree;

        struct Lump {
            Vec3 dir;
            Vec3 shift;
        };
        std::vector<Lump> lump(lumps);
        for (int l = 0; l < lumps; ++l) {
            if (spec.kind == DataKind::MomentZeroDivFree) {
                // Single centered even potential keeps the field exactly odd.
                lump[l].dir = Vec3{uniform01(spec.seed, 100 + 3 * l) - 0.5,
                                   uniform01(spec.seed, 101 + 3 * l) - 0.5,
                                   uniform01(spec.seed, 102 + 3 * l) - 0.5};
                lump[l].shift = Vec3{0, 0, 0};
            } else {
                lump[l].dir = Vec3{uniform01(spec.seed, 100 + 6 * l) - 0.5,
                                   uniform01(spec.seed, 101 + 6 * l) - 0.5,
                                   uniform01(spec.seed, 102 + 6 * l) - 0.5};
                double r = 0.75 * ls;
                lump[l].shift = Vec3{r * (uniform01(spec.seed, 103 + 6 * l) - 0.5),
                                     r * (uniform01(spec.seed, 104 + 6 * l) - 0.5),
                                     r * (uniform01(spec.seed, 105 + 6 * l) - 0.5)};
            }
            double dn = lump[l].dir.norm();
            if (dn < 1e-3) lump[l].dir = Vec3{0, 0, 1};
            else lump[l].dir = lump[l].dir * (1.0 / dn);
        }

        std::size_t n = grid.n();
        parallel_for(
            n,
            [&](std::size_t i) {
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        std::size_t idx = grid.index(i, j, k);
                        Vec3 x = grid.point(i, j, k) - c;
                        for (const Lump& lp : lump) {
                            Vec3 y = x - lp.shift;
                            double r2 = y.norm2() / (2.0 * ls * ls);
                            double env = std::exp(-r2);
                            if (weighted) {
                                // -l^2 Laplacian of the Gaussian; integral zero.
                                env *= (3.0 - y.norm2() / (ls * ls));
                            }
                            for (int comp = 0; comp < 3; ++comp)
                                psi.comp[comp][idx] += env * lp.dir[comp];
                        }
                    }
            },
            2);

        SpectralVectorField psi_hat = transform_forward(psi);
        u = detail::spectral_curl(psi_hat);
        apply_dealias_mask(u);
        u.zero_mean();
    }

    if (spec.kind == DataKind::RoughSobolev) {
        apply_dealias_mask(u);
        u.zero_mean();
    }

    // Normalize to the requested peak speed.
    PhysicalVectorField up = transform_inverse(u);
    double peak = up.max_abs();
    if (peak > 0) {
        double scale = spec.amplitude / peak;
        for (int comp = 0; comp < 3; ++comp)
            for (auto& z : u.comp[comp]) z *= scale;
    }
    u.divergence_free = true;
    return u;
}

// Grid-quadrature moments of a localized field: L1 norm, mean integral and
// the first absolute moment about the box center.
struct MomentReport {
    double l1_norm = 0;
    Vec3 mean_integral;
    double first_absolute_moment = 0;
    Mat3 first_moment;  // M_ij = integral of (x_i - c_i) u_j dx
};

inline MomentReport moments(const PhysicalVectorField& u) {
    const GridSpec& g = u.grid;
    const Vec3 c = g.center();
    const double dv = g.cell_volume();
    MomentReport rep;
    std::size_t n = g.n();
    auto term = [&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k, int what,
                    int a, int b) -> double {
        Vec3 v = u.at(idx);
        Vec3 x = g.point(i, j, k) - c;
        switch (what) {
            case 0: return v.norm();
            case 1: return v[a];
            case 2: return x.norm() * v.norm();
            default: return x[a] * v[b];
        }
    };
    auto reduce = [&](int what, int a, int b) {
        return dv * pairwise_sum(g.size(), [&](std::size_t idx) {
                   std::size_t i = idx / (n * n), j = (idx / n) % n, k = idx % n;
                   return term(idx, i, j, k, what, a, b);
               });
    };
    rep.l1_norm = reduce(0, 0, 0);
    for (int a = 0; a < 3; ++a) rep.mean_integral[a] = reduce(1, a, 0);
    rep.first_absolute_moment = reduce(2, 0, 0);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) rep.first_moment(a, b) = reduce(3, a, b);
    return rep;
}

inline MomentReport moments(const SpectralVectorField& u) {
    return moments(transform_inverse(u));
}

} // namespace cnsf
