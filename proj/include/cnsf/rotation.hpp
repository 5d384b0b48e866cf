#pragma once
//
// The exact linear propagator of the rotating Stokes system and its pieces.
// Per mode k != 0 the flow multiplies divergence-free coefficients by
//
//   M(k) = e^{-t|k|^2} ( cos(Omega t k3/|k|) I + sin(Omega t k3/|k|) R(k) ),
//
// where R(k) is the skew quarter-turn on the plane orthogonal to k. The
// factorized route composes the heat flow, the unimodular wave operators
// G+-(tau), and the Riesz rotation; both routes agree on divergence-free
// fields (the matrix-exponential oracle settles the sign conventions).
//

#include "cnsf/operators.hpp"

namespace cnsf {

// P(k), R(k), and the phase k3/|k| for one wavevector.
struct RotationMatrices {
    Mat3 projection;   // P(k)
    Mat3 rotation;     // R(k)
    double phase = 0;  // k3/|k|

    static RotationMatrices at(const Vec3& k) {
        RotationMatrices r;
        double k2 = k.norm2();
        if (k2 == 0) {
            r.projection = Mat3::identity();
            r.rotation = Mat3::zero();
            r.phase = 0;
            return r;
        }
        double kn = k.norm();
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.projection(i, j) = (i == j ? 1.0 : 0.0) - k[i] * k[j] / k2;
        double inv = 1.0 / kn;
        r.rotation(0, 1) = k.z * inv;
        r.rotation(0, 2) = -k.y * inv;
        r.rotation(1, 0) = -k.z * inv;
        r.rotation(1, 2) = k.x * inv;
        r.rotation(2, 0) = k.y * inv;
        r.rotation(2, 1) = -k.x * inv;
        r.phase = k.z * inv;
        return r;
    }
};

// Closed-form multiplier applied to one coefficient vector.
inline CVec3 coriolis_multiplier(const Vec3& k, double t, double omega, const CVec3& v) {
    double k2 = k.norm2();
    if (k2 == 0) return v;
    double heat = std::exp(-t * k2);
    double theta = omega * t * (k.z / k.norm());
    double c = std::cos(theta), s = std::sin(theta);
    RotationMatrices rm = RotationMatrices::at(k);
    CVec3 rv = rm.rotation * v;
    CVec3 out;
    for (int i = 0; i < 3; ++i) out[i] = heat * (c * v[i] + s * rv[i]);
    return out;
}

// T_Omega(t) on a divergence-free spectral field.
inline SpectralVectorField apply_semigroup(const SpectralVectorField& u, double t,
                                           double omega) {
    if (t < 0) throw std::invalid_argument("apply_semigroup: negative time");
    if (!u.divergence_free)
        throw std::invalid_argument("apply_semigroup requires a divergence-free field");
    SpectralVectorField out = u;
    const GridSpec& g = u.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        Vec3 kv = g.wavevector(i, j, k);
        double k2 = kv.norm2();
        double heat = std::exp(-t * k2);
        double theta = omega * t * (kv.z / kv.norm());
        double c = std::cos(theta), s = std::sin(theta);
        double kn = kv.norm();
        cplx u0 = u.comp[0][idx], u1 = u.comp[1][idx], u2 = u.comp[2][idx];
        // R(k) v, unrolled.
        cplx r0 = (kv.z * u1 - kv.y * u2) / kn;
        cplx r1 = (-kv.z * u0 + kv.x * u2) / kn;
        cplx r2 = (kv.y * u0 - kv.x * u1) / kn;
        out.comp[0][idx] = heat * (c * u0 + s * r0);
        out.comp[1][idx] = heat * (c * u1 + s * r1);
        out.comp[2][idx] = heat * (c * u2 + s * r2);
    });
    return out;
}

// Pure heat multiplier e^{t Delta} (any field).
inline SpectralVectorField apply_heat(const SpectralVectorField& f, double t) {
    if (t < 0) throw std::invalid_argument("apply_heat: negative time");
    SpectralVectorField out = f;
    const GridSpec& g = f.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        double heat = std::exp(-t * g.wavevector(i, j, k).norm2());
        out.comp[0][idx] *= heat;
        out.comp[1][idx] *= heat;
        out.comp[2][idx] *= heat;
    });
    return out;
}

// Wave operator G+-(tau): unimodular phase e^{sign i tau k3/|k|}; k = 0 is
// left unchanged (phase 1).
inline SpectralVectorField wave_operator(const SpectralVectorField& f, double tau, int sign) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("wave_operator: sign must be +-1");
    SpectralVectorField out = f;
    const GridSpec& g = f.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        Vec3 kv = g.wavevector(i, j, k);
        double theta = sign * tau * (kv.z / kv.norm());
        cplx phase{std::cos(theta), std::sin(theta)};
        out.comp[0][idx] *= phase;
        out.comp[1][idx] *= phase;
        out.comp[2][idx] *= phase;
    });
    return out;
}

// Riesz rotation: multiplier R(k); the k = 0 mode is zeroed (mean-zero
// convention, R is undefined there).
inline SpectralVectorField riesz_rotation(const SpectralVectorField& f) {
    SpectralVectorField out(f.grid);
    out.divergence_free = f.divergence_free;
    const GridSpec& g = f.grid;
    g.for_each_mode([&](std::size_t idx, std::size_t i, std::size_t j, std::size_t k) {
        if (idx == 0) return;
        Vec3 kv = g.wavevector(i, j, k);
        double kn = kv.norm();
        cplx u0 = f.comp[0][idx], u1 = f.comp[1][idx], u2 = f.comp[2][idx];
        out.comp[0][idx] = (kv.z * u1 - kv.y * u2) / kn;
        out.comp[1][idx] = (-kv.z * u0 + kv.x * u2) / kn;
        out.comp[2][idx] = (kv.y * u0 - kv.x * u1) / kn;
    });
    return out;
}

// Factorized route: (1/2)[e^{tD} G+(Omega t)(I - i Rz) + e^{tD} G-(Omega t)(I + i Rz)].
// The i on the Riesz term is what makes the two wave branches recombine into
// the real cos/sin multiplier; apply_semigroup is the reference it must match.
inline SpectralVectorField apply_semigroup_factorized(const SpectralVectorField& u, double t,
                                                      double omega) {
    if (!u.divergence_free)
        throw std::invalid_argument("apply_semigroup_factorized requires divergence-free field");
    const GridSpec& g = u.grid;
    SpectralVectorField ru = riesz_rotation(u);
    const cplx iunit{0.0, 1.0};

    SpectralVectorField plus(g), minus(g);
    plus.divergence_free = minus.divergence_free = true;
    for (int c = 0; c < 3; ++c)
        parallel_for(g.size(), [&](std::size_t m) {
            plus.comp[c][m] = u.comp[c][m] - iunit * ru.comp[c][m];
            minus.comp[c][m] = u.comp[c][m] + iunit * ru.comp[c][m];
        });

    SpectralVectorField a = apply_heat(wave_operator(plus, omega * t, +1), t);
    SpectralVectorField b = apply_heat(wave_operator(minus, omega * t, -1), t);
    SpectralVectorField out(g);
    out.divergence_free = true;
    for (int c = 0; c < 3; ++c)
        parallel_for(g.size(), [&](std::size_t m) {
            out.comp[c][m] = 0.5 * (a.comp[c][m] + b.comp[c][m]);
        });
    return out;
}

} // namespace cnsf
