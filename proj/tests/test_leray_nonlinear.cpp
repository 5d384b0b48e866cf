#include <catch2/catch_amalgamated.hpp>

#include "test_helpers.hpp"

using namespace cnsf;

TEST_CASE("leray annihilates gradients and fixes divergence-free fields") {
    GridSpec g = make_grid(16, 1.3);

    // Gradient field u^(k) = i k g(k).
    SpectralVectorField grad(g);
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        cplx gk{uniform01(3, idx) - 0.5, uniform01(4, idx) - 0.5};
        Vec3 kv = g.wavevector(i, j, k);
        const cplx iunit{0, 1};
        grad.comp[0][idx] = iunit * kv.x * gk;
        grad.comp[1][idx] = iunit * kv.y * gk;
        grad.comp[2][idx] = iunit * kv.z * gk;
    });
    SpectralVectorField proj = leray_project(grad);
    CHECK(test::max_coeff_abs(proj) / test::max_coeff_abs(grad) < 1e-13);

    // Already divergence-free: unchanged; projection idempotent.
    for (int trial = 0; trial < 100; ++trial) {
        GridSpec gs = make_grid(8, 1.0);
        SpectralVectorField u = test::random_masked_field(gs, 1000 + trial);
        SpectralVectorField p1 = leray_project(u);
        SpectralVectorField p2 = leray_project(p1);
        double scale = test::max_coeff_abs(p1);
        CHECK(p1.divergence_defect() < 1e-12);
        CHECK(test::max_coeff_diff(p1, p2) / scale < 1e-12);
    }

    // k perpendicular to the coefficient: mode passes through.
    SpectralVectorField single(g);
    single.comp[0][g.index(0, 0, 1)] = cplx{1, 0};
    single.comp[0][g.index(0, 0, g.n() - 1)] = cplx{1, 0};
    SpectralVectorField sp = leray_project(single);
    CHECK(test::max_coeff_diff(single, sp) < 1e-15);
}

TEST_CASE("zero field maps to zero") {
    GridSpec g = make_grid(8, 1.0);
    SpectralVectorField u(g);
    u.divergence_free = true;
    SpectralVectorField nu = nonlinear_term(u);
    CHECK(test::max_coeff_abs(nu) == 0.0);
}

TEST_CASE("unidirectional shear has vanishing nonlinear term") {
    GridSpec g = make_grid(8, 2.0 * pi);
    // u = (A cos(z), 0, 0): u . grad u = 0 and div(u x u) has no solenoidal part.
    SpectralVectorField u(g);
    u.comp[0][g.index(0, 0, 1)] = cplx{0.35, 0};
    u.comp[0][g.index(0, 0, 7)] = cplx{0.35, 0};
    u.divergence_free = true;
    CHECK(u.divergence_defect() < 1e-14);
    SpectralVectorField nu = nonlinear_term(u);
    CHECK(test::max_coeff_abs(nu) < 1e-14);
}

TEST_CASE("pseudo-spectral nonlinear term matches the convolution oracle") {
    GridSpec g = make_grid(8, 1.9);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralVectorField u = test::random_divfree_field(g, 77 + trial, 0.3);
        SpectralVectorField fast = nonlinear_term(u);
        SpectralVectorField slow = test::convolution_nonlinear_oracle(u);
        double scale = std::max(1e-30, test::max_coeff_abs(slow));
        CHECK(test::max_coeff_diff(fast, slow) / scale < 1e-10);
    }
}

TEST_CASE("nonlinear term rejects non-divergence-free input") {
    GridSpec g = make_grid(8, 1.0);
    SpectralVectorField u = test::random_masked_field(g, 5);
    CHECK_FALSE(u.divergence_free);
    CHECK_THROWS_AS(nonlinear_term(u), std::invalid_argument);
}

TEST_CASE("nonlinearity is energy-orthogonal to the field") {
    // Discrete shadow of <P div(u x u), u> = 0 for divergence-free u.
    GridSpec g = make_grid(16, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        SpectralVectorField u = test::random_divfree_field(g, 31 + trial, 0.5);
        SpectralVectorField nu = nonlinear_term(u);
        double re = 0, uu = 0, nn = 0;
        for (int c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < g.size(); ++i) {
                re += (nu.comp[c][i] * std::conj(u.comp[c][i])).real();
                uu += std::norm(u.comp[c][i]);
                nn += std::norm(nu.comp[c][i]);
            }
        // Cauchy-Schwarz scale of the pairing, a stand-in for ||u||^3.
        CHECK(std::abs(re) / std::max(1e-300, std::sqrt(uu * nn)) < 1e-10);
    }
}

TEST_CASE("dealias mask kills every mode beyond n/3") {
    GridSpec g = make_grid(16, 1.0);
    SpectralVectorField u = test::random_masked_field(g, 8);
    // Plant content outside the mask, then mask.
    u.comp[1][g.index(7, 0, 0)] = cplx{1, 1};
    apply_dealias_mask(u);
    CHECK(std::abs(u.comp[1][g.index(7, 0, 0)]) == 0.0);
    bool any_outside = false;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (!g.dealias_keep(i, j, k) && std::abs(u.comp[0][idx]) > 0) any_outside = true;
    });
    CHECK_FALSE(any_outside);
}
