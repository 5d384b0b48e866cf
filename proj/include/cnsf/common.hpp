#pragma once
//
// Small shared utilities: fixed-size 3-vectors / 3x3 matrices (real and
// complex), deterministic reductions, a counter-based RNG, and a thread
// helper whose results never depend on the thread count.
//

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cnsf {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// ---------------------------------------------------------------------------
// vec3 / mat3
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0, y = 0, z = 0;

    double&       operator[](int i)       { return i == 0 ? x : (i == 1 ? y : z); }
    const double& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm2() const { return dot(*this); }
    double norm() const { return std::sqrt(norm2()); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

using CVec3 = std::array<cplx, 3>;

inline CVec3 operator+(const CVec3& a, const CVec3& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline CVec3 operator-(const CVec3& a, const CVec3& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline CVec3 operator*(cplx s, const CVec3& v) { return {s * v[0], s * v[1], s * v[2]}; }
inline CVec3 operator*(double s, const CVec3& v) { return {s * v[0], s * v[1], s * v[2]}; }
inline double cnorm(const CVec3& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

// Row-major real 3x3.
struct Mat3 {
    std::array<double, 9> a{};

    double&       operator()(int i, int j)       { return a[3 * i + j]; }
    const double& operator()(int i, int j) const { return a[3 * i + j]; }

    static Mat3 identity() {
        Mat3 m;
        m(0, 0) = m(1, 1) = m(2, 2) = 1.0;
        return m;
    }
    static Mat3 zero() { return {}; }

    Mat3 operator+(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] + o.a[i];
        return r;
    }
    Mat3 operator-(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] - o.a[i];
        return r;
    }
    Mat3 operator*(double s) const {
        Mat3 r;
        for (int i = 0; i < 9; ++i) r.a[i] = a[i] * s;
        return r;
    }
    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double s = 0;
                for (int k = 0; k < 3; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }
    Vec3 operator*(const Vec3& v) const {
        Vec3 r;
        for (int i = 0; i < 3; ++i)
            r[i] = (*this)(i, 0) * v.x + (*this)(i, 1) * v.y + (*this)(i, 2) * v.z;
        return r;
    }
    CVec3 operator*(const CVec3& v) const {
        CVec3 r;
        for (int i = 0; i < 3; ++i)
            r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
        return r;
    }
    double max_abs() const {
        double m = 0;
        for (double v : a) m = std::max(m, std::abs(v));
        return m;
    }
};

inline Mat3 operator*(double s, const Mat3& m) { return m * s; }

// Complex 3x3, used by the per-mode multiplier algebra in tests.
struct CMat3 {
    std::array<cplx, 9> a{};

    cplx&       operator()(int i, int j)       { return a[3 * i + j]; }
    const cplx& operator()(int i, int j) const { return a[3 * i + j]; }

    CVec3 operator*(const CVec3& v) const {
        CVec3 r;
        for (int i = 0; i < 3; ++i)
            r[i] = (*this)(i, 0) * v[0] + (*this)(i, 1) * v[1] + (*this)(i, 2) * v[2];
        return r;
    }
};

// ---------------------------------------------------------------------------
// Deterministic reductions
// ---------------------------------------------------------------------------

// Pairwise sum of f(i) for i in [0, n). Reduction tree depends only on n,
// so the result is identical for any thread count (it runs serially).
template <class F>
double pairwise_sum(std::size_t n, F&& f) {
    if (n == 0) return 0.0;
    constexpr std::size_t base = 64;
    struct Rec {
        static double run(std::size_t lo, std::size_t hi, F& f) {
            if (hi - lo <= base) {
                double s = 0;
                for (std::size_t i = lo; i < hi; ++i) s += f(i);
                return s;
            }
            std::size_t mid = lo + (hi - lo) / 2;
            return run(lo, mid, f) + run(mid, hi, f);
        }
    };
    return Rec::run(0, n, f);
}

inline double pairwise_sum(const std::vector<double>& v) {
    return pairwise_sum(v.size(), [&](std::size_t i) { return v[i]; });
}

// ---------------------------------------------------------------------------
// Threads
// ---------------------------------------------------------------------------

// Process-wide worker-count hint (CLI --threads). Thread count never changes
// results: parallel regions only perform disjoint writes.
inline int& thread_hint() {
    static int hint = 1;
    return hint;
}

inline void set_thread_hint(int n) { thread_hint() = n < 1 ? 1 : n; }

template <class F>
void parallel_for(std::size_t n, F&& f, std::size_t min_parallel = 2048) {
    int nt = thread_hint();
    if (nt <= 1 || n < min_parallel) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t chunk = (n + nt - 1) / nt;
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (int t = 0; t < nt; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

// ---------------------------------------------------------------------------
// Counter-based RNG
// ---------------------------------------------------------------------------

// Stateless mixer: every draw is a pure function of (seed, counter), so
// generated fields do not depend on mode iteration order or thread count.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t counter) {
    return mix64(mix64(seed) ^ mix64(counter * 0xda942042e4dd58b5ULL + 1));
}

// Uniform in (0,1), never exactly 0 or 1.
inline double uniform01(std::uint64_t seed, std::uint64_t counter) {
    return (counter_hash(seed, counter) >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

// Standard normal pair via Box-Muller on two decorrelated counters.
inline std::pair<double, double> normal_pair(std::uint64_t seed, std::uint64_t counter) {
    double u1 = uniform01(seed, 2 * counter);
    double u2 = uniform01(seed, 2 * counter + 1);
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * pi * u2), r * std::sin(2.0 * pi * u2)};
}

} // namespace cnsf
