#include <catch2/catch_amalgamated.hpp>

#include "cnsf/whole_space.hpp"

using namespace cnsf;

TEST_CASE("gauss-legendre integrates polynomials and oscillations") {
    // int_0^1 x^3 = 1/4 with 2 nodes (exact for degree 3).
    double v = gl_integrate([](double x) { return x * x * x; }, 0.0, 1.0, 2);
    CHECK(v == Catch::Approx(0.25).epsilon(1e-14));
    // int_0^{2pi} sin^2 = pi.
    double w = gl_integrate([](double x) { return std::sin(x) * std::sin(x); }, 0.0, 2.0 * pi, 24);
    CHECK(w == Catch::Approx(pi).epsilon(1e-12));
    // Oscillatory: int_0^{10} cos(40 x) dx = sin(400)/40.
    double o = gl_integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 10.0, 400);
    CHECK(o == Catch::Approx(std::sin(400.0) / 40.0).margin(1e-12));
}

TEST_CASE("spherical means match brute-force sphere quadrature") {
    // int_{S^2} e^{i n.q} dsigma = 4 pi j0(|q|), and the n / n n moments.
    Vec3 q{0.7, -1.9, 2.3};
    int np = 120, na = 240;
    GaussLegendre prule(np);
    cplx s0{0, 0};
    CVec3 s1{};
    std::array<cplx, 9> s2{};
    for (int ip = 0; ip < np; ++ip) {
        double mu = prule.node[ip];
        double wmu = prule.weight[ip];
        double snt = std::sqrt(1.0 - mu * mu);
        for (int ia = 0; ia < na; ++ia) {
            double phi = 2.0 * pi * ia / na;
            Vec3 n{snt * std::cos(phi), snt * std::sin(phi), mu};
            cplx e = std::exp(cplx{0, n.dot(q)}) * (wmu * 2.0 * pi / na);
            s0 += e;
            for (int i = 0; i < 3; ++i) {
                s1[i] += n[i] * e;
                for (int j = 0; j < 3; ++j) s2[3 * i + j] += n[i] * n[j] * e;
            }
        }
    }
    auto m = detail::spherical_means(q.norm());
    CHECK(std::abs(s0 - cplx{4.0 * pi * m.j0, 0}) < 1e-10);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(s1[i] - cplx{0, 4.0 * pi * m.e1 * q[i]}) < 1e-10);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double expect = 4.0 * pi * (m.e1 * (i == j ? 1.0 : 0.0) - m.e2 * q[i] * q[j]);
            CHECK(std::abs(s2[3 * i + j] - cplx{expect, 0}) < 1e-10);
        }

    // Taylor branch validated the same way at a small |q| (the closed trig
    // forms lose digits to cancellation there, so the sphere sum is the
    // reference on both branches).
    Vec3 qs{0.012, -0.02, 0.017};
    cplx t0{0, 0};
    CVec3 t1{};
    cplx t2zz{0, 0};
    for (int ip = 0; ip < np; ++ip) {
        double mu = prule.node[ip];
        double wmu = prule.weight[ip];
        double snt = std::sqrt(1.0 - mu * mu);
        for (int ia = 0; ia < na; ++ia) {
            double phi = 2.0 * pi * ia / na;
            Vec3 n{snt * std::cos(phi), snt * std::sin(phi), mu};
            cplx e = std::exp(cplx{0, n.dot(qs)}) * (wmu * 2.0 * pi / na);
            t0 += e;
            for (int i = 0; i < 3; ++i) t1[i] += n[i] * e;
            t2zz += n.z * n.z * e;
        }
    }
    auto ms = detail::spherical_means(qs.norm());
    CHECK(std::abs(t0 - cplx{4.0 * pi * ms.j0, 0}) < 1e-12);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(t1[i] - cplx{0, 4.0 * pi * ms.e1 * qs[i]}) < 1e-12);
    CHECK(std::abs(t2zz - cplx{4.0 * pi * (ms.e1 - ms.e2 * qs.z * qs.z), 0}) < 1e-12);
}

TEST_CASE("curl datum under pure heat flow matches the closed form") {
    // Omega = 0: T(t) curl(G_l a) = curl(G_l' a) scaled, l'^2 = l^2 + 2t.
    AnalyticDatum d;
    d.family = AnalyticFamily::CurlGaussian;
    d.length_scale = 0.8;
    d.amplitude = 1.3;
    LinearFlowEvaluator ev(d, 0.0);
    double t = 0.9;
    double l2p = d.length_scale * d.length_scale + 2.0 * t;
    double scale = d.amplitude * std::pow(d.length_scale * d.length_scale / l2p, 1.5);
    for (const Vec3& x : {Vec3{0.3, 0, 0.2}, Vec3{1.1, 0, -0.7}, Vec3{2.0, 0, 1.4}}) {
        Vec3 got = ev.eval(t, x);
        Vec3 expect = (-scale * std::exp(-0.5 * x.norm2() / l2p) / l2p) * x.cross(d.axis);
        CHECK((got - expect).norm() < 1e-10 * std::max(1e-12, expect.norm()) + 1e-13);
    }

    // t = 0 reproduces the datum.
    Vec3 x{0.5, 0, 0.4};
    Vec3 u0 = (-(d.amplitude / (d.length_scale * d.length_scale)) *
               std::exp(-0.5 * x.norm2() / (d.length_scale * d.length_scale))) *
              x.cross(d.axis);
    CHECK((ev.eval(0.0, x) - u0).norm() < 1e-10 * u0.norm());
}

TEST_CASE("radial route matches the tensor spherical rule with rotation") {
    QuadratureSpec quad;
    quad.radial = 96;
    quad.polar = 64;
    quad.azimuthal = 48;
    quad.tolerance = 1e-6;

    for (auto family : {AnalyticFamily::ProjectedGaussian, AnalyticFamily::CurlGaussian}) {
        AnalyticDatum d;
        d.family = family;
        d.length_scale = 0.7;
        LinearFlowEvaluator ev(d, 6.0);
        double t = 0.35;
        std::vector<Vec3> pts{{0.4, 0, 0.1}, {0.0, 0, 1.2}, {1.5, 0, -0.8}, {0.7, 0.6, 0.2}};
        SampledField tensor = whole_space_linear_eval(d, t, 6.0, pts, quad);
        for (std::size_t i = 0; i < pts.size(); ++i) {
            Vec3 fast = ev.eval(t, pts[i]);
            CHECK((fast - tensor.value[i]).norm() < 5e-7 + 5e-6 * tensor.value[i].norm());
        }
    }
}

TEST_CASE("whole-space flow matches a periodic-grid semigroup run") {
    // Independent cross-check of every sign convention: sample the curl
    // datum on a fine torus, apply the grid semigroup, compare interior
    // point values against the whole-space evaluator.
    GridSpec g = make_grid(64, 1.0);
    AnalyticDatum d;
    d.family = AnalyticFamily::CurlGaussian;
    d.length_scale = 0.05;
    LinearFlowEvaluator ev(d, 12.0);

    Vec3 c = g.center();
    PhysicalVectorField f(g);
    std::size_t n = g.n();
    double l2 = d.length_scale * d.length_scale;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Vec3 x = g.point(i, j, k) - c;
                Vec3 u0 = (-(d.amplitude / l2) * std::exp(-0.5 * x.norm2() / l2)) *
                          x.cross(d.axis);
                for (int comp = 0; comp < 3; ++comp)
                    f.comp[comp][g.index(i, j, k)] = u0[comp];
            }
    SpectralVectorField uh = transform_forward(f);
    uh.divergence_free = true; // curl field
    double t = 0.001;
    SpectralVectorField ut = apply_semigroup(uh, t, 12.0);
    PhysicalVectorField up = transform_inverse(ut);

    // The rotating kernel carries an algebraic far tail (the symbol
    // xi3/|xi| is direction-singular at 0), so the torus wraps a ~1e-5
    // relative contamination even for well-localized data; the tolerance
    // reflects that, and any sign or convention error would show up three
    // orders of magnitude above it.
    double worst = 0, scale = 0;
    for (std::size_t idx : {g.index(34, 32, 36), g.index(30, 28, 32), g.index(36, 34, 30)}) {
        std::size_t i = idx / (n * n), j = (idx / n) % n, k = idx % n;
        Vec3 x = g.point(i, j, k) - c;
        Vec3 expect = ev.eval(t, x);
        Vec3 got = up.at(idx);
        worst = std::max(worst, (got - expect).norm());
        scale = std::max(scale, expect.norm());
    }
    CHECK(worst < 2e-5 * scale);
}

TEST_CASE("closed-form L2 norm agrees with cylindrical physical quadrature") {
    // Two independent quadratures: Parseval on the Fourier side against the
    // cylindrical physical-space integral of point samples.
    AnalyticDatum d;
    d.family = AnalyticFamily::CurlGaussian;
    d.length_scale = 0.9;

    // Heat-only flow: compact field, fine lattice, 1e-6 agreement.
    {
        LinearFlowEvaluator ev(d, 0.0);
        double t = 0.4;
        double plancherel = ev.l2_norm(t);
        auto mag = [&](const Vec3& x) { return ev.eval(t, x).norm(); };
        double physical = cylindrical_lp_integral(
            mag, 2.0, 9.5, -9.5, 9.5, 0.045, 0.045, [](double, double) { return true; });
        CHECK(physical == Catch::Approx(plancherel).epsilon(1e-6));
    }

    // Rotating flow spreads slow fronts over a wide region; coarser check.
    {
        LinearFlowEvaluator ev(d, 2.0);
        double t = 0.4;
        double plancherel = ev.l2_norm(t);
        auto mag = [&](const Vec3& x) { return ev.eval(t, x).norm(); };
        double physical = cylindrical_lp_integral(
            mag, 2.0, 14.0, -14.0, 14.0, 0.08, 0.08, [](double, double) { return true; });
        CHECK(physical == Catch::Approx(plancherel).epsilon(3e-3));
    }
}

TEST_CASE("kernel: heat reduction, self-similarity, spatial decay") {
    QuadratureSpec quad;
    quad.radial = 96;
    quad.polar = 48;
    quad.azimuthal = 32;
    quad.tolerance = 1e-6;

    // Omega = 0: K = G_t(x) I.
    double t = 0.7;
    Vec3 x{0.5, -0.2, 0.9};
    Mat3 k0 = kernel_eval(x, t, 0.0, quad);
    double gt = std::pow(4.0 * pi * t, -1.5) * std::exp(-x.norm2() / (4.0 * t));
    CHECK(k0(0, 0) + k0(1, 1) + k0(2, 2) == Catch::Approx(3.0 * gt).epsilon(1e-6));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(k0(i, j)) < 1e-8);

    // Self-similarity: K_{Omega,4}(e1) = 4^{-3/2} K_{4 Omega,1}(e1 / 2).
    double omega = 3.0;
    Mat3 k4 = kernel_eval(Vec3{1, 0, 0}, 4.0, omega, quad);
    Mat3 k1 = kernel_eval(Vec3{0.5, 0, 0}, 1.0, 4.0 * omega, quad);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(k4(i, j) == Catch::Approx(std::pow(4.0, -1.5) * k1(i, j)).margin(1e-7));

    // Spatial decay. The heat reduction decays like a Gaussian; with
    // rotation the direction-singular symbol xi3/|xi| at the origin leaves
    // an algebraic (Omega t)^2-weighted tail, so only a cubic-rate check is
    // meaningful there (and the far values converge slowly: they are tiny
    // cancellation leftovers of an O(1)-mass integrand).
    QuadratureSpec loose = quad;
    loose.tolerance = 5e-3;
    double near0 = kernel_eval(Vec3{1, 0, 0}, 0.25, 0.0, loose).max_abs();
    // The true Omega = 0 far value is e^{-36}; what the rule returns is its
    // own noise floor, so assert against that floor. The separation from
    // the rotating case (algebraic, ~1e-2 of near) stays 5 orders wide.
    QuadratureSpec nogate = quad;
    nogate.tolerance = 1e300;
    nogate.radial = 256;
    nogate.polar = 128;
    nogate.azimuthal = 64;
    double far0 = kernel_eval(Vec3{6, 0, 0}, 0.25, 0.0, nogate).max_abs();
    CHECK(far0 < 1e-7 * near0);
    double near_rot = kernel_eval(Vec3{2, 0, 1}, 0.25, omega, loose).max_abs();
    double far_rot = kernel_eval(Vec3{8, 0, 4}, 0.25, omega, loose).max_abs();
    CHECK(far_rot < 0.05 * near_rot);

    // Radial fast route agrees (kernel columns are curl/projection-free, so
    // compare through the datum evaluators is not possible; instead check
    // the halving error is small and t <= 0 rejected).
    CHECK_THROWS_AS(kernel_eval(x, 0.0, omega, quad), std::invalid_argument);

    // Unconverged quadrature is reported, not silently accepted.
    QuadratureSpec tiny;
    tiny.radial = 8;
    tiny.polar = 8;
    tiny.azimuthal = 8;
    tiny.tolerance = 1e-12;
    CHECK_THROWS_AS(kernel_eval(Vec3{3.0, 1.0, 2.0}, 0.01, 40.0, tiny), QuadratureFailure);
}

TEST_CASE("wave block evaluator: L2 conservation and two quadrature routes") {
    AnalyticDatum d;
    d.family = AnalyticFamily::LpBlock;
    d.block = 0;
    WaveBlockEvaluator ev(d, +1);

    // Plancherel value is tau-independent; compare against the physical-side
    // cylindrical quadrature at tau = 4 (the field has moved but the norm
    // must not change).
    double l2 = ev.l2_norm();
    auto mag = [&](const Vec3& x) { return std::abs(ev.eval(4.0, x)); };
    double phys = cylindrical_lp_integral(
        mag, 2.0, 60.0, -60.0, 60.0, 0.22, 0.22, [](double, double) { return true; });
    CHECK(phys == Catch::Approx(l2).epsilon(2e-3));

    // eval_checked reports a small refinement error at moderate argument.
    double err = 1;
    ev.eval_checked(2.0, Vec3{1.0, 0, -3.0}, 0.0, &err);
    CHECK(err < 1e-8);
}
