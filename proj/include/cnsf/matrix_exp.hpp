#pragma once
//
// 3x3 matrix exponential by Pade-13 scaling and squaring (Higham's double
// precision parameters), and the per-mode generator oracle
//
//   exp( -t ( |k|^2 I + Omega P(k) J P(k) ) ),
//
// the independent ground truth for the closed-form semigroup multiplier.
//

#include "cnsf/rotation.hpp"

namespace cnsf {

inline Mat3 matrix_exp(const Mat3& a) {
    // Pade-13 coefficients.
    static const double b[14] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
    const double theta13 = 5.371920351148152;

    double nrm = 0;
    for (int i = 0; i < 3; ++i) {
        double row = std::abs(a(i, 0)) + std::abs(a(i, 1)) + std::abs(a(i, 2));
        nrm = std::max(nrm, row);
    }
    int squarings = 0;
    if (nrm > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
    }
    Mat3 as = a * std::pow(2.0, -squarings);

    Mat3 i3 = Mat3::identity();
    Mat3 a2 = as * as;
    Mat3 a4 = a2 * a2;
    Mat3 a6 = a4 * a2;

    Mat3 u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                   b[3] * a2 + b[1] * i3;
    Mat3 u = as * u_inner;
    Mat3 v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 +
             b[0] * i3;

    // Solve (v - u) x = (v + u) by Gaussian elimination with partial pivoting.
    Mat3 lhs = v - u;
    Mat3 rhs = v + u;
    std::array<std::array<double, 6>, 3> w{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            w[i][j] = lhs(i, j);
            w[i][j + 3] = rhs(i, j);
        }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(w[r][col]) > std::abs(w[piv][col])) piv = r;
        std::swap(w[piv], w[col]);
        double d = w[col][col];
        for (int j = 0; j < 6; ++j) w[col][j] /= d;
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double f = w[r][col];
            for (int j = 0; j < 6; ++j) w[r][j] -= f * w[col][j];
        }
    }
    Mat3 x;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) x(i, j) = w[i][j + 3];

    for (int s = 0; s < squarings; ++s) x = x * x;
    return x;
}

// exp(-t(|k|^2 I + Omega P J P)) on the literal 3x3 generator.
inline Mat3 semigroup_oracle(const Vec3& k, double t, double omega) {
    if (t < 0) throw std::invalid_argument("semigroup_oracle: negative time");
    Mat3 j3 = Mat3::zero();
    j3(0, 1) = -1.0;
    j3(1, 0) = 1.0;
    RotationMatrices rm = RotationMatrices::at(k);
    Mat3 gen = (-t) * (k.norm2() * Mat3::identity() + omega * (rm.projection * j3 * rm.projection));
    return matrix_exp(gen);
}

} // namespace cnsf
