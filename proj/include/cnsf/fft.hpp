#pragma once
//
// Thin wrapper around FFTW for 3D complex transforms. Plans and work buffers
// are cached per thread (the FFTW planner itself is guarded by a mutex).
// Forward transforms carry the 1/n^3 factor, so the zero mode of a forward
// transform is the spatial mean. FFTW runs single-threaded here; transform
// output is therefore bitwise independent of the thread count.
//

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

#include "cnsf/field.hpp"

namespace cnsf {
namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class Fft3 {
public:
    explicit Fft3(std::size_t n) : n_(n) {
        std::size_t total = n * n * n;
        buf_ = fftw_alloc_complex(total);
        std::lock_guard<std::mutex> lock(planner_mutex());
        int ni = static_cast<int>(n);
        fwd_ = fftw_plan_dft_3d(ni, ni, ni, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_3d(ni, ni, ni, buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Fft3() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(buf_);
    }

    Fft3(const Fft3&) = delete;
    Fft3& operator=(const Fft3&) = delete;

    // Real samples -> complex coefficients, scaled by 1/n^3.
    void forward(const std::vector<double>& in, std::vector<cplx>& out) {
        std::size_t total = n_ * n_ * n_;
        for (std::size_t i = 0; i < total; ++i) {
            buf_[i][0] = in[i];
            buf_[i][1] = 0.0;
        }
        fftw_execute(fwd_);
        out.resize(total);
        double scale = 1.0 / static_cast<double>(total);
        for (std::size_t i = 0; i < total; ++i)
            out[i] = cplx{buf_[i][0] * scale, buf_[i][1] * scale};
    }

    // Complex coefficients -> real samples (imaginary parts dropped; they are
    // rounding noise for Hermitian input).
    void inverse(const std::vector<cplx>& in, std::vector<double>& out) {
        std::size_t total = n_ * n_ * n_;
        for (std::size_t i = 0; i < total; ++i) {
            buf_[i][0] = in[i].real();
            buf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        out.resize(total);
        for (std::size_t i = 0; i < total; ++i) out[i] = buf_[i][0];
    }

    // Inverse keeping the complex result, for diagnostics.
    void inverse_complex(const std::vector<cplx>& in, std::vector<cplx>& out) {
        std::size_t total = n_ * n_ * n_;
        for (std::size_t i = 0; i < total; ++i) {
            buf_[i][0] = in[i].real();
            buf_[i][1] = in[i].imag();
        }
        fftw_execute(bwd_);
        out.resize(total);
        for (std::size_t i = 0; i < total; ++i) out[i] = cplx{buf_[i][0], buf_[i][1]};
    }

private:
    std::size_t n_;
    fftw_complex* buf_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

inline Fft3& fft_for(std::size_t n) {
    thread_local std::map<std::size_t, std::unique_ptr<Fft3>> cache;
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<Fft3>(n);
    return *slot;
}

} // namespace detail

inline SpectralVectorField transform_forward(const PhysicalVectorField& f) {
    SpectralVectorField out(f.grid);
    std::size_t n = f.grid.n();
    parallel_for(
        3, [&](std::size_t c) { detail::fft_for(n).forward(f.comp[c], out.comp[c]); }, 2);
    return out;
}

inline PhysicalVectorField transform_inverse(const SpectralVectorField& f) {
    PhysicalVectorField out(f.grid);
    std::size_t n = f.grid.n();
    parallel_for(
        3, [&](std::size_t c) { detail::fft_for(n).inverse(f.comp[c], out.comp[c]); }, 2);
    return out;
}

} // namespace cnsf
