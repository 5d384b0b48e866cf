#pragma once
//
// Decay bookkeeping: the theoretical envelope
//
//   M^{m,p}_j(t) = t^{-j/2 - m/2 - (3/2)(1 - 1/p)} (1 + |Omega| t)^{-1 + 2/p},
//
// the running compensated supremum
//
//   U^{m,p}_j(t) = sup_{0 < tau <= t} |Omega|^{1 + j/2}
//                  tau^{j/2 + m/2 + (3/2)(1 - 1/p)} (1 + |Omega| tau)^{1 - 2/p}
//                  ||u(tau)||,
//
// and time-stamped norm series.
//

#include <limits>
#include <stdexcept>
#include <vector>

#include "cnsf/common.hpp"

namespace cnsf {

struct NormSeries {
    double m = 0;                      // derivative order
    double p = 2;                      // Lebesgue exponent (inf allowed)
    double omega = 0;
    std::vector<double> time;
    std::vector<double> value;

    void push(double t, double v) {
        time.push_back(t);
        value.push_back(v);
    }
    std::size_t size() const { return time.size(); }
};

struct Envelope {
    double m = 0;
    double p = 2;
    int j = 0; // moment index, 0 or 1
    double omega = 0;

    double time_exponent() const {
        double invp = std::isinf(p) ? 0.0 : 1.0 / p;
        return -0.5 * j - 0.5 * m - 1.5 * (1.0 - invp);
    }
    double rotation_exponent() const {
        double invp = std::isinf(p) ? 0.0 : 1.0 / p;
        return -1.0 + 2.0 * invp;
    }

    double operator()(double t) const {
        if (!(t > 0)) throw std::invalid_argument("envelope: t must be positive");
        return std::pow(t, time_exponent()) *
               std::pow(1.0 + std::abs(omega) * t, rotation_exponent());
    }
};

inline double envelope_eval(const Envelope& e, double t) { return e(t); }

struct RatioTrack {
    std::vector<double> time;
    std::vector<double> value; // running supremum, non-decreasing
};

inline RatioTrack ratio_track(const NormSeries& series, double m, double p, int j,
                              double omega) {
    Envelope env{m, p, j, omega};
    RatioTrack track;
    double running = 0;
    double weight = std::pow(std::abs(omega), 1.0 + 0.5 * j);
    for (std::size_t i = 0; i < series.size(); ++i) {
        double t = series.time[i];
        if (!(t > 0)) throw std::invalid_argument("ratio_track: series times must be positive");
        double compensated = weight * series.value[i] / env(t);
        running = std::max(running, compensated);
        track.time.push_back(t);
        track.value.push_back(running);
    }
    return track;
}

} // namespace cnsf
