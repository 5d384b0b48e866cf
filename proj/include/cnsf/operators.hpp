#pragma once
//
// Spectral-side operators on the periodic box: Leray projection, dealiasing,
// and the pseudo-spectral nonlinear term P div(u (x) u). The nonlinear path
// is alias-free on the 2/3-rule mask (inputs are expected mask-supported;
// evolved fields are re-masked each step).
//

#include "cnsf/fft.hpp"

namespace cnsf {

// P(k) v = v - k (k.v)/|k|^2; k = 0 passes through unchanged.
inline SpectralVectorField leray_project(const SpectralVectorField& f) {
    SpectralVectorField out = f;
    const GridSpec& g = f.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        Vec3 kv = g.wavevector(i, j, k);
        double k2 = kv.norm2();
        cplx dot = kv.x * f.comp[0][idx] + kv.y * f.comp[1][idx] + kv.z * f.comp[2][idx];
        cplx s = dot / k2;
        out.comp[0][idx] = f.comp[0][idx] - kv.x * s;
        out.comp[1][idx] = f.comp[1][idx] - kv.y * s;
        out.comp[2][idx] = f.comp[2][idx] - kv.z * s;
    });
    out.divergence_free = true;
    return out;
}

inline void apply_dealias_mask(SpectralVectorField& f) {
    const GridSpec& g = f.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (!g.dealias_keep(i, j, k)) {
            f.comp[0][idx] = f.comp[1][idx] = f.comp[2][idx] = cplx{0, 0};
        }
    });
}

// P div(u (x) u), computed pseudo-spectrally: inverse transform, form the 9
// products on the grid, forward transform, contract with i k_j, project,
// mask. Rejects fields not flagged divergence-free.
inline SpectralVectorField nonlinear_term(const SpectralVectorField& u,
                                          double* max_speed_out = nullptr) {
    if (!u.divergence_free)
        throw std::invalid_argument("nonlinear_term requires a divergence-free field");
    const GridSpec& g = u.grid;

    PhysicalVectorField up = transform_inverse(u);
    if (max_speed_out) *max_speed_out = up.max_abs();

    // Products are symmetric; six distinct entries.
    // Order: (0,0) (0,1) (0,2) (1,1) (1,2) (2,2).
    static constexpr int pa[6] = {0, 0, 0, 1, 1, 2};
    static constexpr int pb[6] = {0, 1, 2, 1, 2, 2};
    std::array<std::vector<cplx>, 6> prod_hat;
    parallel_for(
        6,
        [&](std::size_t p) {
            const auto& a = up.comp[pa[p]];
            const auto& b = up.comp[pb[p]];
            std::vector<double> prod(g.size());
            for (std::size_t i = 0; i < g.size(); ++i) prod[i] = a[i] * b[i];
            detail::fft_for(g.n()).forward(prod, prod_hat[p]);
        },
        2);
    auto hat = [&](int a, int b) -> const std::vector<cplx>& {
        static constexpr int lut[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
        return prod_hat[lut[a][b]];
    };

    SpectralVectorField out(g);
    const cplx iunit{0.0, 1.0};
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (!g.dealias_keep(i, j, k) || idx == 0) return;
        Vec3 kv = g.wavevector(i, j, k);
        for (int c = 0; c < 3; ++c) {
            cplx s = kv.x * hat(c, 0)[idx] + kv.y * hat(c, 1)[idx] + kv.z * hat(c, 2)[idx];
            out.comp[c][idx] = iunit * s;
        }
    });
    out = leray_project(out);
    out.zero_mean();
    return out;
}

} // namespace cnsf
