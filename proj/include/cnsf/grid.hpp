#pragma once
//
// Periodic-box discretization: mode counts, wavenumbers in standard FFT
// ordering, and the 2/3-rule dealiasing mask.
//

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "cnsf/common.hpp"

namespace cnsf {

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

class GridSpec {
public:
    GridSpec() = default;

    GridSpec(std::size_t n, double box_length) : n_(n), box_length_(box_length) {
        if (n_ < 8 || !is_power_of_two(n_))
            throw std::invalid_argument("grid.n must be a power of two >= 8, got " +
                                        std::to_string(n));
        if (!(box_length_ > 0.0))
            throw std::invalid_argument("grid.box_length must be positive");
        freq_.resize(n_);
        wavenumber_.resize(n_);
        const double k0 = 2.0 * pi / box_length_;
        for (std::size_t j = 0; j < n_; ++j) {
            long f = (j < n_ / 2) ? static_cast<long>(j)
                                  : static_cast<long>(j) - static_cast<long>(n_);
            freq_[j] = f;
            wavenumber_[j] = k0 * static_cast<double>(f);
        }
    }

    std::size_t n() const { return n_; }
    std::size_t size() const { return n_ * n_ * n_; }
    double box_length() const { return box_length_; }
    double dx() const { return box_length_ / static_cast<double>(n_); }
    double cell_volume() const { return dx() * dx() * dx(); }
    double k0() const { return 2.0 * pi / box_length_; }

    long freq(std::size_t j) const { return freq_[j]; }
    double wavenumber(std::size_t j) const { return wavenumber_[j]; }

    // Row-major (i, j, k) with the last index fastest.
    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const {
        return (i * n_ + j) * n_ + k;
    }

    Vec3 wavevector(std::size_t i, std::size_t j, std::size_t k) const {
        return {wavenumber_[i], wavenumber_[j], wavenumber_[k]};
    }

    // Grid point, coordinates in [0, L).
    Vec3 point(std::size_t i, std::size_t j, std::size_t k) const {
        double h = dx();
        return {h * static_cast<double>(i), h * static_cast<double>(j),
                h * static_cast<double>(k)};
    }

    Vec3 center() const {
        double c = 0.5 * box_length_;
        return {c, c, c};
    }

    // 2/3-rule: a mode survives iff every |freq| <= n/3.
    long dealias_limit() const { return static_cast<long>(n_) / 3; }

    bool dealias_keep(std::size_t i, std::size_t j, std::size_t k) const {
        long m = dealias_limit();
        return std::abs(freq_[i]) <= m && std::abs(freq_[j]) <= m && std::abs(freq_[k]) <= m;
    }

    bool operator==(const GridSpec& o) const {
        return n_ == o.n_ && box_length_ == o.box_length_;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }

    // Loop over all modes, f(flat_index, i, j, k). Parallel over the slow
    // index; f must only write at its own flat index.
    template <class F>
    void for_each_mode(F&& f) const {
        parallel_for(
            n_,
            [&](std::size_t i) {
                for (std::size_t j = 0; j < n_; ++j)
                    for (std::size_t k = 0; k < n_; ++k) f(index(i, j, k), i, j, k);
            },
            2);
    }

private:
    std::size_t n_ = 0;
    double box_length_ = 0;
    std::vector<long> freq_;
    std::vector<double> wavenumber_;
};

inline GridSpec make_grid(std::size_t n, double box_length) { return GridSpec(n, box_length); }

} // namespace cnsf
