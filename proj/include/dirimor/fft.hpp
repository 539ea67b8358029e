#pragma once

#include "dirimor/core.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <new>
#include <vector>

namespace dirimor::fft {

/** \brief fftw_malloc-backed array so every buffer shares the planner's alignment. */
template <class T>
class Buffer {
public:
    explicit Buffer(std::size_t n) : n_(n), p_(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1)))) {
        if (!p_) throw std::bad_alloc();
        std::memset(static_cast<void*>(p_), 0, sizeof(T) * (n ? n : 1));
    }
    ~Buffer() { fftw_free(p_); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;

    T* data() { return p_; }
    const T* data() const { return p_; }
    T& operator[](std::size_t i) { return p_[i]; }
    const T& operator[](std::size_t i) const { return p_[i]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    T* p_;
};

namespace detail {

inline std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

/// Plans are created once per size and executed with the new-array interface.
inline fftw_plan r2c_plan(int n) {
    static std::map<int, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    Buffer<double> in(n);
    Buffer<fftw_complex> out(n / 2 + 1);
    fftw_plan p = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE);
    plans.emplace(n, p);
    return p;
}

inline fftw_plan c2c_backward_plan(int n) {
    static std::map<int, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(planner_mutex());
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    Buffer<fftw_complex> in(n), out(n);
    fftw_plan p = fftw_plan_dft_1d(n, in.data(), out.data(), FFTW_BACKWARD, FFTW_ESTIMATE);
    plans.emplace(n, p);
    return p;
}

}  // namespace detail

/** \brief Fourier coefficients c_nu = (1/n) sum_k x_k e^{-2 pi i nu k / n}, nu = 0..n/2. */
inline std::vector<cplx> real_coefficients(Buffer<double>& x) {
    const int n = static_cast<int>(x.size());
    Buffer<fftw_complex> out(n / 2 + 1);
    fftw_execute_dft_r2c(detail::r2c_plan(n), x.data(), out.data());
    std::vector<cplx> c(n / 2 + 1);
    for (int i = 0; i <= n / 2; ++i) c[i] = cplx(out[i][0], out[i][1]) / static_cast<double>(n);
    return c;
}

/** \brief y_m = sum_b a_b e^{+2 pi i b m / n}, unnormalized. */
inline std::vector<cplx> backward(const std::vector<cplx>& a) {
    const int n = static_cast<int>(a.size());
    Buffer<fftw_complex> in(n), out(n);
    for (int i = 0; i < n; ++i) {
        in[i][0] = a[i].real();
        in[i][1] = a[i].imag();
    }
    fftw_execute_dft(detail::c2c_backward_plan(n), in.data(), out.data());
    std::vector<cplx> y(n);
    for (int i = 0; i < n; ++i) y[i] = cplx(out[i][0], out[i][1]);
    return y;
}

/**
 * \brief s_nu = sum_j c_j e^{-i nu theta_j} for nu = 0..B, by Gaussian gridding.
 *
 * Type-1 nonuniform transform with twofold oversampling and a 12-point
 * spreading half-width, accurate to about 1e-12 relative to sum |c_j|.
 */
inline std::vector<cplx> nonuniform_coefficients(const std::vector<double>& theta, const std::vector<double>& c,
                                                 long B) {
    const long M = 2 * B + 1;
    long Mr = 64;
    while (Mr < 2 * M) Mr <<= 1;
    constexpr int sp = 12;
    const double R = static_cast<double>(Mr) / M;
    const double tau = pi * sp / (static_cast<double>(M) * M * R * (R - 0.5));
    const double h = two_pi / Mr;
    double E3[sp + 1];
    for (int m = 0; m <= sp; ++m) E3[m] = std::exp(-(m * h) * (m * h) / (4.0 * tau));
    Buffer<double> grid(Mr);
    for (std::size_t j = 0; j < theta.size(); ++j) {
        double t = std::fmod(theta[j], two_pi);
        if (t < 0.0) t += two_pi;
        const long k0 = static_cast<long>(std::floor(t / h));
        const double d = t - k0 * h;  // in [0, h)
        const double e1 = c[j] * std::exp(-d * d / (4.0 * tau));
        const double g = std::exp(d * h / (2.0 * tau));
        // k = k0 + m for m = -sp+1..sp, offset x_k - t = m h - d
        double up = 1.0, down = 1.0;
        const double ginv = 1.0 / g;
        for (int m = 0; m <= sp; ++m) {
            const long k = ((k0 + m) % Mr + Mr) % Mr;
            grid[k] += e1 * up * E3[m];
            up *= g;
            if (m > 0 && m < sp) {
                down *= ginv;
                const long kk = ((k0 - m) % Mr + Mr) % Mr;
                grid[kk] += e1 * down * E3[m];
            }
        }
    }
    const auto F = real_coefficients(grid);
    std::vector<cplx> s(B + 1);
    const double scale = std::sqrt(pi / tau);
    for (long nu = 0; nu <= B; ++nu) s[nu] = scale * std::exp(static_cast<double>(nu) * nu * tau) * F[nu];
    return s;
}

}  // namespace dirimor::fft
