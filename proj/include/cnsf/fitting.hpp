#pragma once
//
// Log-log least squares for decay exponents, with an optional
// (1 + |Omega| t)^power compensation divided out before fitting.
//

#include <optional>
#include <string>

#include "cnsf/envelope.hpp"

namespace cnsf {

struct FitWindow {
    double t_lo = 0;
    double t_hi = 0;

    bool contains(double t) const { return t >= t_lo && t <= t_hi; }
};

struct DecayFit {
    FitWindow window;
    double slope = 0;
    double intercept = 0;       // log of the prefactor
    double residual_rms = 0;
    std::size_t samples = 0;
    std::string regime;         // "early" / "late" / ""
};

struct Compensation {
    double omega = 0;
    double power = 0; // divide the series by (1 + |omega| t)^power before fitting
};

inline DecayFit fit_rate(const NormSeries& series, const FitWindow& window,
                         const std::optional<Compensation>& comp = std::nullopt,
                         const std::string& regime = "") {
    if (!(window.t_hi > window.t_lo) || !(window.t_lo > 0))
        throw std::invalid_argument("fit_rate: degenerate window");
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < series.size(); ++i) {
        double t = series.time[i];
        if (!window.contains(t)) continue;
        double v = series.value[i];
        if (!(v > 0)) throw std::invalid_argument("fit_rate: nonpositive value in window");
        if (comp) v /= std::pow(1.0 + std::abs(comp->omega) * t, comp->power);
        lx.push_back(std::log(t));
        ly.push_back(std::log(v));
    }
    std::size_t n = lx.size();
    if (n < 10) throw std::invalid_argument("fit_rate: window must contain >= 10 samples");
    double span = *std::max_element(lx.begin(), lx.end()) -
                  *std::min_element(lx.begin(), lx.end());
    if (span < std::log(10.0) * 0.995)
        throw std::invalid_argument("fit_rate: window must span at least one decade");

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    DecayFit fit;
    fit.window = window;
    fit.samples = n;
    fit.regime = regime;
    double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = ly[i] - (fit.intercept + fit.slope * lx[i]);
        ss += r * r;
    }
    fit.residual_rms = std::sqrt(ss / n);
    return fit;
}

// Log-spaced sample times, inclusive of both ends.
inline std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
    if (!(hi > lo) || !(lo > 0) || count < 2)
        throw std::invalid_argument("log_spaced: bad range");
    std::vector<double> out(count);
    double la = std::log(lo), lb = std::log(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (count - 1));
    // exp(log(x)) can land an ulp outside [lo, hi]; pin the endpoints.
    out.front() = lo;
    out.back() = hi;
    return out;
}

} // namespace cnsf
