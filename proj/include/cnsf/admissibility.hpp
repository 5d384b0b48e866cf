#pragma once
//
// Exponent admissibility for the global existence theory, and the
// scaling-invariant smallness number. The admissible region is
//
//   1/2 < s < 9/10,        1/3 + s/9 <= 1/q < 7/12 - s/6,
//   (3/2)(1/2 - 1/q) <= 1/theta <= (5/2)(1/2 - 1/q),
//   1/(2q) + s/2 - 1/2 < 1/theta < 5/8 - 3/(2q) + s/4.
//
// The theory's threshold constant is never quantified, so the smallness
// check reports the invariant number without a pass/fail verdict.
//

#include <cmath>
#include <string>
#include <vector>

#include "cnsf/field.hpp"

namespace cnsf {

struct AdmissibilityResult {
    bool admissible = true;
    std::vector<std::string> violations;
};

inline AdmissibilityResult admissibility_check(double s, double inv_q, double inv_theta) {
    AdmissibilityResult res;
    auto fail = [&](const std::string& msg) {
        res.admissible = false;
        res.violations.push_back(msg);
    };
    if (!std::isfinite(s) || !std::isfinite(inv_q) || !std::isfinite(inv_theta)) {
        fail("inputs must be finite");
        return res;
    }
    if (!(s > 0.5)) fail("s must exceed 1/2 (strict)");
    if (!(s < 0.9)) fail("s must be below 9/10 (strict)");
    double q_lo = 1.0 / 3.0 + s / 9.0;
    double q_hi = 7.0 / 12.0 - s / 6.0;
    if (!(inv_q >= q_lo))
        fail("1/q must be >= 1/3 + s/9 = " + std::to_string(q_lo));
    if (!(inv_q < q_hi))
        fail("1/q must be < 7/12 - s/6 = " + std::to_string(q_hi));
    double t_lo = 1.5 * (0.5 - inv_q);
    double t_hi = 2.5 * (0.5 - inv_q);
    if (!(inv_theta >= t_lo))
        fail("1/theta must be >= (3/2)(1/2 - 1/q) = " + std::to_string(t_lo));
    if (!(inv_theta <= t_hi))
        fail("1/theta must be <= (5/2)(1/2 - 1/q) = " + std::to_string(t_hi));
    double u_lo = 0.5 * inv_q + 0.5 * s - 0.5;
    double u_hi = 5.0 / 8.0 - 1.5 * inv_q + 0.25 * s;
    if (!(inv_theta > u_lo))
        fail("1/theta must exceed 1/(2q) + s/2 - 1/2 = " + std::to_string(u_lo));
    if (!(inv_theta < u_hi))
        fail("1/theta must be below 5/8 - 3/(2q) + s/4 = " + std::to_string(u_hi));
    return res;
}

// The admissible 1/q interval for a given s (empty if s itself is out).
inline std::pair<double, double> admissible_inv_q_range(double s) {
    return {1.0 / 3.0 + s / 9.0, 7.0 / 12.0 - s / 6.0};
}

struct SmallnessReport {
    double value = 0; // |Omega|^{-(s - 1/2)/2} ||u0||_{H^s-dot}
    double sobolev_norm = 0;
    double s = 0;
    double omega = 0;
    std::string threshold_note =
        "existence threshold constant is not quantified by the theory; "
        "the value is scaling-invariant and logged for reproducibility";
};

inline SmallnessReport smallness_check(const SpectralVectorField& u0, double s, double omega) {
    if (!(s > 0.5 && s < 0.9))
        throw std::invalid_argument("smallness_check: s must lie in (1/2, 9/10)");
    if (omega == 0.0) throw std::invalid_argument("smallness_check: Omega must be nonzero");
    SmallnessReport rep;
    rep.s = s;
    rep.omega = omega;
    // Plancherel H^s-dot norm.
    const GridSpec& g = u0.grid;
    double l3 = g.box_length() * g.box_length() * g.box_length();
    std::size_t n = g.n();
    double acc = pairwise_sum(g.size(), [&](std::size_t idx) {
        if (idx == 0) return 0.0;
        std::size_t i = idx / (n * n), j = (idx / n) % n, k = idx % n;
        double k2s = std::pow(g.wavevector(i, j, k).norm2(), s);
        return k2s * (std::norm(u0.comp[0][idx]) + std::norm(u0.comp[1][idx]) +
                      std::norm(u0.comp[2][idx]));
    });
    rep.sobolev_norm = std::sqrt(l3 * acc);
    rep.value = std::pow(std::abs(omega), -0.5 * (s - 0.5)) * rep.sobolev_norm;
    return rep;
}

} // namespace cnsf
