#include <catch2/catch_amalgamated.hpp>

#include "cnsf/initial_data.hpp"
#include "test_helpers.hpp"

using namespace cnsf;

TEST_CASE("gaussian-divfree: divergence-free, mean-zero, reproducible") {
    GridSpec g = make_grid(32, 1.0);
    InitialDataSpec spec;
    spec.kind = DataKind::GaussianDivFree;
    spec.seed = 12345;
    spec.amplitude = 0.8;
    SpectralVectorField u = generate_initial_data(spec, g);

    CHECK(u.divergence_defect() < 1e-12);
    CHECK(std::abs(u.comp[0][0]) == 0.0);
    CHECK(std::abs(u.comp[1][0]) == 0.0);
    CHECK(std::abs(u.comp[2][0]) == 0.0);
    CHECK(u.hermitian_defect() < 1e-12);

    // Requested peak speed.
    PhysicalVectorField up = transform_inverse(u);
    CHECK(up.max_abs() == Catch::Approx(0.8).epsilon(1e-10));

    // Bit-reproducible for a fixed seed regardless of thread count.
    set_thread_hint(4);
    SpectralVectorField u4 = generate_initial_data(spec, g);
    set_thread_hint(1);
    SpectralVectorField u1 = generate_initial_data(spec, g);
    CHECK(test::max_coeff_diff(u4, u1) == 0.0);
    CHECK(test::max_coeff_diff(u4, u) == 0.0);

    // Different seed, different field.
    spec.seed = 54321;
    SpectralVectorField other = generate_initial_data(spec, g);
    CHECK(test::max_coeff_diff(other, u) > 1e-6);
}

TEST_CASE("moment-zero-divfree: first moments vanish, field is odd") {
    GridSpec g = make_grid(64, 1.0);
    InitialDataSpec spec;
    spec.kind = DataKind::MomentZeroDivFree;
    spec.seed = 7;
    spec.amplitude = 1.0;
    SpectralVectorField u = generate_initial_data(spec, g);
    PhysicalVectorField up = transform_inverse(u);
    MomentReport rep = moments(up);

    CHECK(u.divergence_defect() < 1e-12);
    CHECK(rep.mean_integral.norm() < 1e-10 * rep.l1_norm);
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            CHECK(std::abs(rep.first_moment(a, b)) < 1e-10 * rep.l1_norm);
    CHECK(rep.first_absolute_moment > 0.0);

    // Odd about the box center: u(2c - x) = -u(x) on grid points.
    std::size_t n = g.n();
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                std::size_t a = g.index(i, j, k);
                std::size_t b = g.index((n - i) % n, (n - j) % n, (n - k) % n);
                for (int c = 0; c < 3; ++c)
                    worst = std::max(worst, std::abs(up.comp[c][a] + up.comp[c][b]));
            }
    CHECK(worst < 1e-12 * up.max_abs() + 1e-13);
}

TEST_CASE("rough-sobolev: dyadic shells follow the designed slope") {
    GridSpec g = make_grid(64, 2.0 * pi);
    InitialDataSpec spec;
    spec.kind = DataKind::RoughSobolev;
    spec.seed = 3;
    spec.amplitude = 1.0;
    spec.sobolev_index = 0.7;
    SpectralVectorField u = generate_initial_data(spec, g);
    CHECK(u.divergence_defect() < 1e-12);
    CHECK(u.hermitian_defect() < 1e-12);

    // Shell energies E_j = sum_{2^j <= |k| < 2^{j+1}} |u^|^2 should scale like
    // 2^{-2 s j}; fit the log-slope over shells j = 1..4 (|k| in [2, 32)).
    std::array<double, 5> shell{};
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        double rho = g.wavevector(i, j, k).norm();
        int bin = static_cast<int>(std::floor(std::log2(rho)));
        if (bin < 0 || bin > 4) return;
        for (int c = 0; c < 3; ++c) shell[bin] += std::norm(u.comp[c][idx]);
    });
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int b = 1; b <= 4; ++b) {
        double x = b, y = std::log2(shell[b]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
        ++cnt;
    }
    double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    CHECK(slope == Catch::Approx(-1.4).margin(0.25));

    // Partial sums: H^{0.7} stays ~flat per shell; H^{1.5} weighted shell
    // energies grow, i.e. the series diverges with the cutoff.
    double w07_lo = std::pow(2.0, 2 * 0.7 * 1) * shell[1];
    double w07_hi = std::pow(2.0, 2 * 0.7 * 4) * shell[4];
    double w15_lo = std::pow(2.0, 2 * 1.5 * 1) * shell[1];
    double w15_hi = std::pow(2.0, 2 * 1.5 * 4) * shell[4];
    CHECK(w15_hi / w15_lo > 4.0 * (w07_hi / w07_lo));
}

TEST_CASE("generator validation") {
    GridSpec g = make_grid(16, 1.0);
    InitialDataSpec spec;
    spec.length_scale = 0.2; // >= L/8
    CHECK_THROWS_AS(generate_initial_data(spec, g), std::invalid_argument);
    spec.length_scale = 0.05;
    spec.amplitude = -1;
    CHECK_THROWS_AS(generate_initial_data(spec, g), std::invalid_argument);
    spec = InitialDataSpec{};
    spec.kind = DataKind::RoughSobolev;
    spec.sobolev_index = 0.95;
    CHECK_THROWS_AS(generate_initial_data(spec, g), std::invalid_argument);
}

TEST_CASE("moments: unit-mass gaussian quadrature and odd-field symmetry") {
    GridSpec g = make_grid(64, 1.0);
    Vec3 c = g.center();
    std::size_t n = g.n();

    // Unit-mass Gaussian, width 5 cells: box truncation and Riemann error
    // both fall below 1e-8.
    double ls = 5.0 * g.dx();
    PhysicalVectorField f(g);
    double mass = std::pow(2.0 * pi * ls * ls, -1.5);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vec3 x = g.point(i, j, k) - c;
                f.comp[0][g.index(i, j, k)] = mass * std::exp(-x.norm2() / (2.0 * ls * ls));
            }
    MomentReport rep = moments(f);
    CHECK(std::abs(rep.l1_norm - 1.0) < 1e-8);
    CHECK(rep.mean_integral.x == Catch::Approx(1.0).epsilon(1e-8));
    // E|x| = ls sqrt(8/pi) for the 3D Gaussian; the |x| cusp at the origin
    // limits the Riemann rate here.
    CHECK(rep.first_absolute_moment ==
          Catch::Approx(ls * std::sqrt(8.0 / pi)).epsilon(1e-4));

    // Odd profile: mean integral vanishes, absolute moment does not.
    double lso = 4.0 * g.dx();
    PhysicalVectorField odd(g);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vec3 x = g.point(i, j, k) - c;
                odd.comp[1][g.index(i, j, k)] =
                    x.x * std::exp(-x.norm2() / (2.0 * lso * lso));
            }
    MomentReport orep = moments(odd);
    CHECK(orep.mean_integral.norm() < 1e-12);
    CHECK(orep.first_absolute_moment > 0.0);
}
