#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace voiptap::detail {

// Real-input transform of a fixed size, backed by an FFTW plan that is
// created once and reused for every call.
class RealFft {
public:
    explicit RealFft(std::size_t n);
    ~RealFft();

    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    std::size_t size() const noexcept { return n_; }
    std::size_t bins() const noexcept { return n_ / 2 + 1; }

    // x is zero padded (or truncated) to n; returns n/2 + 1 bins.
    std::vector<std::complex<double>> forward(std::span<const double> x);

    // Inverse of forward, including the 1/n scale.
    std::vector<double> inverse(std::span<const std::complex<double>> spectrum);

private:
    std::size_t n_;
    double* real_;
    void* complex_;  // fftw_complex*
    void* fwd_;      // fftw_plan
    void* inv_;
};

}  // namespace voiptap::detail
