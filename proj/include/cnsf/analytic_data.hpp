#pragma once
//
// Closed-form whole-space data for the linear-flow experiments. Each family
// has an analytically known Fourier transform factored as a radial profile
// times a low-degree angular polynomial, which is what the evaluators need.
//
// Conventions: F[f](xi) = int f(x) e^{-i xi.x} dx, so the Gaussian envelope
// G_l(x) = e^{-|x|^2 / (2 l^2)} has transform (2 pi l^2)^{3/2} e^{-l^2 rho^2 / 2}.
//
//  projected-gaussian  u0 = P(G_l c): the flowed object of the linear decay
//                      estimate, T(t) P f with f = G_l c in L1. The L1 datum
//                      norm is ||f||_{L1}; mean of f nonzero, so the plain
//                      t-rates saturate.
//  curl-gaussian       u0 = curl(G_l a): divergence-free, u0 in L1 with
//                      finite |x| moment; mean exactly zero. Saturates the
//                      first-moment decay rates.
//  curl-gaussian-m1    u0 = curl(-l^2 Lap G_l a): additionally every first
//                      moment vanishes (the potential integrates to zero).
//  lp-block            scalar profile supported in the dyadic annulus of
//                      block k, for the dispersive experiment.
//

#include <string>

#include "cnsf/lp_partition.hpp"
#include "cnsf/quadrature.hpp"

namespace cnsf {

enum class AnalyticFamily { ProjectedGaussian, CurlGaussian, CurlGaussianM1, LpBlock };

inline AnalyticFamily analytic_family_from_string(const std::string& s) {
    if (s == "projected-gaussian") return AnalyticFamily::ProjectedGaussian;
    if (s == "curl-gaussian") return AnalyticFamily::CurlGaussian;
    if (s == "curl-gaussian-m1") return AnalyticFamily::CurlGaussianM1;
    if (s == "lp-block") return AnalyticFamily::LpBlock;
    throw std::invalid_argument("unknown analytic datum family '" + s + "'");
}

inline std::string to_string(AnalyticFamily f) {
    switch (f) {
        case AnalyticFamily::ProjectedGaussian: return "projected-gaussian";
        case AnalyticFamily::CurlGaussian: return "curl-gaussian";
        case AnalyticFamily::CurlGaussianM1: return "curl-gaussian-m1";
        default: return "lp-block";
    }
}

struct AnalyticDatum {
    AnalyticFamily family = AnalyticFamily::ProjectedGaussian;
    double length_scale = 1.0;  // Gaussian envelope width
    Vec3 axis{0, 0, 1};         // direction c (projected) or a (curl); e3 keeps
                                // the flow axisymmetric, which the evaluators use
    int block = 0;              // lp-block only
    double amplitude = 1.0;

    // Radial profile A(rho): u0^(xi) = A(rho) * (angular polynomial).
    double radial(double rho) const {
        double l = length_scale;
        double gauss = std::pow(2.0 * pi * l * l, 1.5) * std::exp(-0.5 * l * l * rho * rho);
        switch (family) {
            case AnalyticFamily::ProjectedGaussian: return amplitude * gauss;
            case AnalyticFamily::CurlGaussian: return amplitude * rho * gauss;
            case AnalyticFamily::CurlGaussianM1:
                return amplitude * rho * (l * l * rho * rho) * gauss;
            case AnalyticFamily::LpBlock:
            default:
                return amplitude * LPPartition::block_profile(block, rho);
        }
    }

    bool is_curl_type() const {
        return family == AnalyticFamily::CurlGaussian || family == AnalyticFamily::CurlGaussianM1;
    }
    bool is_scalar() const { return family == AnalyticFamily::LpBlock; }

    // Radius beyond which the profile (with heat factor e^{-t rho^2}) is below
    // 1e-14 of its peak.
    double radial_cut(double t) const {
        if (family == AnalyticFamily::LpBlock)
            return LPPartition::support_hi * std::pow(2.0, block);
        double decay = 0.5 * length_scale * length_scale + t;
        return std::sqrt(34.0 / decay);
    }

    // ||f||_{L1} of the physical-space datum, by radial quadrature of the
    // explicit profiles (they are Gaussians times polynomials).
    double l1_norm() const;
    // || |x| u0 ||_{L1} (curl families).
    double weighted_l1_norm() const;
};

namespace detail {

// |curl(h(r) a)| = |h'(r)| |rhat x a|; integrate over R^3 in spherical shells.
// The angular factor is int_{S^2} |rhat x a| dsigma = pi^2 for |a| = 1.
template <class DH>
double curl_l1(const DH& dh_dr, double rmax, int nodes, double extra_weight_pow) {
    const double angular = pi * pi;
    return gl_integrate(
        [&](double r) {
            return angular * std::pow(r, 2.0 + extra_weight_pow) * std::abs(dh_dr(r));
        },
        0.0, rmax, nodes);
}

} // namespace detail

inline double AnalyticDatum::l1_norm() const {
    double l = length_scale;
    switch (family) {
        case AnalyticFamily::ProjectedGaussian:
            // ||G_l c||_{L1} = (2 pi l^2)^{3/2} for |c| = 1.
            return amplitude * std::pow(2.0 * pi * l * l, 1.5);
        case AnalyticFamily::CurlGaussian: {
            auto dh = [&](double r) { return amplitude * (-r / (l * l)) * std::exp(-0.5 * r * r / (l * l)); };
            return detail::curl_l1(dh, 12.0 * l, 400, 0.0);
        }
        case AnalyticFamily::CurlGaussianM1: {
            // h = (3 - r^2/l^2) e^{-r^2/2l^2};  h' = (r^3/l^4 - 5 r/l^2) e^{...}.
            auto dh = [&](double r) {
                double s = r / l;
                return amplitude * (s * s * s / l - 5.0 * s / l) * std::exp(-0.5 * s * s);
            };
            return detail::curl_l1(dh, 14.0 * l, 400, 0.0);
        }
        case AnalyticFamily::LpBlock:
        default:
            throw std::invalid_argument("l1_norm: lp-block datum has no closed L1 form here");
    }
}

inline double AnalyticDatum::weighted_l1_norm() const {
    double l = length_scale;
    switch (family) {
        case AnalyticFamily::CurlGaussian: {
            auto dh = [&](double r) { return amplitude * (-r / (l * l)) * std::exp(-0.5 * r * r / (l * l)); };
            return detail::curl_l1(dh, 12.0 * l, 400, 1.0);
        }
        case AnalyticFamily::CurlGaussianM1: {
            auto dh = [&](double r) {
                double s = r / l;
                return amplitude * (s * s * s / l - 5.0 * s / l) * std::exp(-0.5 * s * s);
            };
            return detail::curl_l1(dh, 14.0 * l, 400, 1.0);
        }
        default:
            throw std::invalid_argument("weighted_l1_norm: defined for curl families only");
    }
}

} // namespace cnsf
