#pragma once
//
// Velocity fields on the periodic box. PhysicalVectorField holds three real
// arrays of point values; SpectralVectorField holds three complex coefficient
// arrays in standard FFT ordering. Forward transforms divide by n^3, so the
// k = 0 coefficient is the spatial mean.
//

#include <complex>
#include <stdexcept>
#include <vector>

#include "cnsf/common.hpp"
#include "cnsf/grid.hpp"

namespace cnsf {

struct PhysicalVectorField {
    GridSpec grid;
    std::array<std::vector<double>, 3> comp;

    PhysicalVectorField() = default;
    explicit PhysicalVectorField(const GridSpec& g) : grid(g) {
        for (auto& c : comp) c.assign(g.size(), 0.0);
    }

    Vec3 at(std::size_t idx) const { return {comp[0][idx], comp[1][idx], comp[2][idx]}; }

    bool all_finite() const {
        for (const auto& c : comp)
            for (double v : c)
                if (!std::isfinite(v)) return false;
        return true;
    }

    double max_abs() const {
        // Pointwise Euclidean magnitude; serial max is deterministic.
        double m = 0;
        for (std::size_t idx = 0; idx < grid.size(); ++idx) {
            double s = comp[0][idx] * comp[0][idx] + comp[1][idx] * comp[1][idx] +
                       comp[2][idx] * comp[2][idx];
            if (s > m) m = s;
        }
        return std::sqrt(m);
    }
};

struct SpectralVectorField {
    GridSpec grid;
    std::array<std::vector<cplx>, 3> comp;
    bool divergence_free = false;

    SpectralVectorField() = default;
    explicit SpectralVectorField(const GridSpec& g) : grid(g) {
        for (auto& c : comp) c.assign(g.size(), cplx{0.0, 0.0});
    }

    CVec3 at(std::size_t idx) const { return {comp[0][idx], comp[1][idx], comp[2][idx]}; }

    void set(std::size_t idx, const CVec3& v) {
        comp[0][idx] = v[0];
        comp[1][idx] = v[1];
        comp[2][idx] = v[2];
    }

    void zero_mean() {
        comp[0][0] = comp[1][0] = comp[2][0] = cplx{0, 0};
    }

    bool all_finite() const {
        for (const auto& c : comp)
            for (const cplx& v : c)
                if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
        return true;
    }

    // Largest |conj-symmetry defect| relative to the coefficient scale.
    double hermitian_defect() const {
        std::size_t n = grid.n();
        double worst = 0, scale = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    std::size_t a = grid.index(i, j, k);
                    std::size_t b = grid.index((n - i) % n, (n - j) % n, (n - k) % n);
                    for (int c = 0; c < 3; ++c) {
                        worst = std::max(worst, std::abs(comp[c][a] - std::conj(comp[c][b])));
                        scale = std::max(scale, std::abs(comp[c][a]));
                    }
                }
        return scale > 0 ? worst / scale : 0.0;
    }

    // Largest |k . u(k)| / (|k| |u(k)|) over nonzero modes. Modes whose
    // magnitude sits at the rounding floor of the field are skipped: a
    // projection can annihilate a mode down to fp dust, where the ratio
    // stops being meaningful.
    double divergence_defect() const {
        double peak = 0;
        for (const auto& c : comp)
            for (const cplx& z : c) peak = std::max(peak, std::abs(z));
        double floor = 1e-13 * peak;
        double worst = 0;
        std::size_t n = grid.n();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    if (i == 0 && j == 0 && k == 0) continue;
                    std::size_t idx = grid.index(i, j, k);
                    Vec3 kv = grid.wavevector(i, j, k);
                    CVec3 u = at(idx);
                    double mag = cnorm(u);
                    if (mag <= floor) continue;
                    cplx div = kv.x * u[0] + kv.y * u[1] + kv.z * u[2];
                    worst = std::max(worst, std::abs(div) / (kv.norm() * mag));
                }
        return worst;
    }

    // Grid L2 norm via Plancherel: ||u||_{L2}^2 = L^3 sum |u^(k)|^2.
    double l2_norm() const {
        double l3 = grid.box_length() * grid.box_length() * grid.box_length();
        double s = pairwise_sum(grid.size(), [&](std::size_t i) {
            return std::norm(comp[0][i]) + std::norm(comp[1][i]) + std::norm(comp[2][i]);
        });
        return std::sqrt(l3 * s);
    }

    // ||grad u||_{L2}^2 = L^3 sum |k|^2 |u^(k)|^2, used by the energy ledger.
    double h1_seminorm_sq() const {
        double l3 = grid.box_length() * grid.box_length() * grid.box_length();
        std::size_t n = grid.n();
        std::vector<double> slab(n, 0.0);
        parallel_for(
            n,
            [&](std::size_t i) {
                double acc = 0;
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t k = 0; k < n; ++k) {
                        std::size_t idx = grid.index(i, j, k);
                        double k2 = grid.wavevector(i, j, k).norm2();
                        acc += k2 * (std::norm(comp[0][idx]) + std::norm(comp[1][idx]) +
                                     std::norm(comp[2][idx]));
                    }
                slab[i] = acc;
            },
            2);
        // Parallel part writes disjoint slots; this reduction is serial.
        return l3 * pairwise_sum(slab);
    }
};

inline void require_same_grid(const GridSpec& a, const GridSpec& b) {
    if (a != b) throw std::invalid_argument("grid mismatch between fields");
}

} // namespace cnsf
