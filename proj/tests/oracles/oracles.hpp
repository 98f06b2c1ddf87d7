#pragma once

// Reference implementations used only by tests. They deliberately take the
// slow, obvious route (std::deque, O(N^2) sums, direct DFT) so they share no
// code path with the library.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numbers>
#include <optional>
#include <vector>

namespace oracle {

// Unbounded queue that refuses pushes once it holds `cap` elements.
class BoundedQueue {
public:
    explicit BoundedQueue(std::size_t cap) : cap_(cap) {}

    bool put(std::uint8_t v) {
        if (q_.size() >= cap_) return false;
        q_.push_back(v);
        return true;
    }
    std::optional<std::uint8_t> get() {
        if (q_.empty()) return std::nullopt;
        auto v = q_.front();
        q_.pop_front();
        return v;
    }
    std::size_t size() const { return q_.size(); }
    void clear() { q_.clear(); }

private:
    std::size_t cap_;
    std::deque<std::uint8_t> q_;
};

// Literal walk of the firmware sender loop over an abstract buffer size.
inline std::vector<std::size_t> trace_send_loop(std::size_t stored, std::size_t pmin, std::size_t pmax) {
    std::vector<std::size_t> frames;
    std::size_t remaining = stored;
    std::size_t count = 0;
    while (count < stored) {
        if (remaining < pmin) break;
        const std::size_t size = remaining < pmax ? remaining : pmax;
        remaining -= size;
        count += size;
        frames.push_back(size);
    }
    return frames;
}

// Direct DFT of x zero padded to n, bins 0..n/2.
inline std::vector<std::complex<double>> dft_half(const std::vector<double>& x, std::size_t n) {
    std::vector<std::complex<double>> out(n / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
        std::complex<double> acc{};
        for (std::size_t i = 0; i < x.size() && i < n; ++i) {
            const double a = -2.0 * std::numbers::pi * static_cast<double>((k * i) % n) / static_cast<double>(n);
            acc += x[i] * std::complex<double>(std::cos(a), std::sin(a));
        }
        out[k] = acc;
    }
    return out;
}

// xcorr(x, 'coeff') by explicit lagged sums; index k holds lag k - (N - 1).
inline std::vector<double> xcorr_coeff(const std::vector<double>& x) {
    const long n = static_cast<long>(x.size());
    double r0 = 0.0;
    for (double v : x) r0 += v * v;
    std::vector<double> r(static_cast<std::size_t>(2 * n - 1));
    for (long lag = -(n - 1); lag <= n - 1; ++lag) {
        double acc = 0.0;
        for (long i = 0; i < n; ++i) {
            const long j = i + lag;
            if (j >= 0 && j < n) acc += x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
        }
        r[static_cast<std::size_t>(lag + n - 1)] = acc / r0;
    }
    return r;
}

// Least-squares line through (i, x_i) by the 2x2 normal equations on the
// raw (uncentred) abscissa.
inline std::vector<double> detrend_normal_equations(const std::vector<double>& x) {
    const double n = static_cast<double>(x.size());
    double st = 0.0, stt = 0.0, sx = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = static_cast<double>(i);
        st += t;
        stt += t * t;
        sx += x[i];
        stx += t * x[i];
    }
    const double det = n * stt - st * st;
    const double b = (n * stx - st * sx) / det;
    const double a = (sx - b * st) / n;
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - (a + b * static_cast<double>(i));
    return out;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

}  // namespace oracle
