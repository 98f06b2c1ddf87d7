#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

namespace voiptap::detail {
namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

}  // namespace

RealFft::RealFft(std::size_t n) : n_(n) {
    std::lock_guard lock(planner_mutex());
    real_ = fftw_alloc_real(n_);
    auto* cplx = fftw_alloc_complex(bins());
    if (real_ == nullptr || cplx == nullptr) {
        fftw_free(real_);
        fftw_free(cplx);
        throw std::bad_alloc();
    }
    complex_ = cplx;
    const int len = static_cast<int>(n_);
    fwd_ = fftw_plan_dft_r2c_1d(len, real_, cplx, FFTW_ESTIMATE);
    inv_ = fftw_plan_dft_c2r_1d(len, cplx, real_, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(inv_));
    fftw_free(real_);
    fftw_free(complex_);
}

std::vector<std::complex<double>> RealFft::forward(std::span<const double> x) {
    const std::size_t m = std::min(x.size(), n_);
    std::copy_n(x.begin(), m, real_);
    std::fill(real_ + m, real_ + n_, 0.0);
    fftw_execute(static_cast<fftw_plan>(fwd_));

    const auto* c = static_cast<const fftw_complex*>(complex_);
    std::vector<std::complex<double>> out(bins());
    for (std::size_t k = 0; k < out.size(); ++k) {
        out[k] = {c[k][0], c[k][1]};
    }
    return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) {
    auto* c = static_cast<fftw_complex*>(complex_);
    for (std::size_t k = 0; k < bins(); ++k) {
        const auto v = k < spectrum.size() ? spectrum[k] : std::complex<double>{};
        c[k][0] = v.real();
        c[k][1] = v.imag();
    }
    fftw_execute(static_cast<fftw_plan>(inv_));
    std::vector<double> out(real_, real_ + n_);
    const double scale = 1.0 / static_cast<double>(n_);
    for (auto& v : out) {
        v *= scale;
    }
    return out;
}

}  // namespace voiptap::detail
