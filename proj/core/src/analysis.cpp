#include "voiptap/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include "fft.hpp"
#include "voiptap/error.hpp"

namespace voiptap::analysis {
namespace {

double max_abs(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double to_db(double p) {
    return 10.0 * std::log10(std::max(p, std::numeric_limits<double>::min()));
}

// |X_k|^2 folded onto the non-negative frequencies. n is the transform size
// (even), so bins 0 and n/2 have no mirror image.
std::vector<double> one_sided_power(const std::vector<std::complex<double>>& spec, std::size_t n) {
    std::vector<double> p(spec.size());
    for (std::size_t k = 0; k < spec.size(); ++k) {
        p[k] = std::norm(spec[k]);
        const bool mirrored = k != 0 && !(n % 2 == 0 && k == n / 2);
        if (mirrored) p[k] *= 2.0;
    }
    return p;
}

void require_signal(const Signal& sig) {
    if (!(sig.fs > 0.0)) {
        throw DomainError("sample rate must be positive");
    }
    if (sig.x.empty()) {
        throw DomainError("signal is empty");
    }
}

}  // namespace

Normalization parse_normalization(std::string_view s) {
    if (s == "none") return Normalization::none;
    if (s == "peak") return Normalization::peak;
    if (s == "rms") return Normalization::rms;
    throw ConfigError("unknown normalization '" + std::string(s) + "' (expected peak, rms or none)");
}

Signal detrend(const Signal& sig) {
    const std::size_t n = sig.size();
    if (n < 2) {
        throw DomainError("detrend needs at least two samples");
    }
    const double centre = (static_cast<double>(n) - 1.0) / 2.0;
    const double mean = mean_value(sig.x);
    double stt = 0.0;
    double stx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) - centre;
        stt += t * t;
        stx += t * (sig.x[i] - mean);
    }
    const double slope = stx / stt;
    Signal out{std::vector<double>(n), sig.fs};
    for (std::size_t i = 0; i < n; ++i) {
        out.x[i] = sig.x[i] - mean - slope * (static_cast<double>(i) - centre);
    }
    return out;
}

Signal normalize(const Signal& sig, Normalization mode) {
    double scale = 1.0;
    switch (mode) {
        case Normalization::none:
            return sig;
        case Normalization::peak:
            scale = max_abs(sig.x);
            if (scale == 0.0) throw DegenerateSignalError("peak normalization of an all-zero signal");
            break;
        case Normalization::rms:
            scale = sample_std(sig.x);
            if (scale == 0.0) throw DegenerateSignalError("rms normalization of a signal with zero spread");
            break;
    }
    Signal out = sig;
    for (auto& v : out.x) v /= scale;
    return out;
}

double db_power(double p2, double p1) {
    if (!(p2 > 0.0) || !(p1 > 0.0)) {
        throw DomainError("power ratio needs two positive powers");
    }
    return 10.0 * std::log10(p2 / p1);
}

double db_volt(double v2, double v1) {
    const double a = std::abs(v2);
    const double b = std::abs(v1);
    if (!(a > 0.0) || !(b > 0.0)) {
        throw DomainError("voltage ratio needs two nonzero magnitudes");
    }
    return 20.0 * std::log10(a / b);
}

double mean_value(std::span<const double> x) {
    if (x.empty()) return 0.0;
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_std(std::span<const double> x) {
    if (x.size() < 2) return 0.0;
    // A constant sequence has exactly zero spread; the mean's rounding error
    // would otherwise leave a tiny positive value.
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    if (*lo == *hi) return 0.0;
    const double m = mean_value(x);
    double acc = 0.0;
    for (double v : x) acc += (v - m) * (v - m);
    return std::sqrt(acc / static_cast<double>(x.size() - 1));
}

double true_rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    double acc = 0.0;
    for (double v : x) acc += v * v;
    return std::sqrt(acc / static_cast<double>(x.size()));
}

Correlogram autocorr(const Signal& sig) {
    require_signal(sig);
    const std::size_t n = sig.size();
    double energy = 0.0;
    for (double v : sig.x) energy += v * v;
    if (energy == 0.0) {
        throw DegenerateSignalError("autocorrelation of an all-zero signal");
    }

    // Linear (not circular) correlation needs a transform of at least 2N - 1.
    detail::RealFft fft(2 * n);
    auto spec = fft.forward(sig.x);
    for (auto& c : spec) c = std::norm(c);
    const auto r = fft.inverse(spec);

    Correlogram out;
    out.n = n;
    out.fs = sig.fs;
    out.rx.resize(2 * n - 1);
    for (std::size_t k = 0; k < n; ++k) {
        const double v = r[k] / energy;
        out.rx[n - 1 + k] = v;
        out.rx[n - 1 - k] = v;
    }
    out.rx[n - 1] = 1.0;
    return out;
}

double autocorr_time(const Correlogram& corr, double threshold) {
    for (std::size_t i = corr.rx.size(); i-- > 0;) {
        if (corr.rx[i] > threshold) {
            const auto ind = static_cast<double>(i + 1);
            return (ind - static_cast<double>(corr.n)) / corr.fs;
        }
    }
    throw DomainError("no lag exceeds the autocorrelation threshold");
}

SignalStats stats(const Signal& sig) {
    require_signal(sig);
    const auto& x = sig.x;
    SignalStats s;
    s.max_v = *std::max_element(x.begin(), x.end());
    s.min_v = *std::min_element(x.begin(), x.end());
    s.mean_v = mean_value(x);
    s.rms_v = sample_std(x);

    const double peak = max_abs(x);
    double smallest = std::numeric_limits<double>::infinity();
    for (double v : x) {
        if (v != 0.0) smallest = std::min(smallest, std::abs(v));
    }
    if (peak == 0.0) {
        throw DegenerateSignalError("dynamic range undefined: all samples are zero");
    }
    if (s.rms_v == 0.0) {
        throw DegenerateSignalError("crest factor undefined: signal has zero standard deviation");
    }
    s.dr_db = 20.0 * std::log10(peak / smallest);
    s.cf_db = 20.0 * std::log10(peak / s.rms_v);
    s.duration_s = static_cast<double>(x.size() - 1) / sig.fs;
    s.autocorr_time_s = autocorr_time(autocorr(sig));
    return s;
}

std::size_t histogram_bins(std::size_t n) {
    return static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n) / 10.0)));
}

HistogramSpec histogram(const Signal& sig) {
    const std::size_t n = sig.size();
    if (n < 10) {
        throw DomainError("histogram needs at least 10 samples");
    }
    const std::size_t bins = histogram_bins(n);
    auto [lo_it, hi_it] = std::minmax_element(sig.x.begin(), sig.x.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    HistogramSpec h;
    h.edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.edges[i] = lo + width * static_cast<double>(i);
    }
    h.edges.back() = hi;
    h.counts.assign(bins, 0);
    for (double v : sig.x) {
        auto b = static_cast<std::size_t>(std::floor((v - lo) / width));
        // The top edge is inclusive.
        b = std::min(b, bins - 1);
        ++h.counts[b];
    }
    return h;
}

std::vector<double> blackman_periodic(std::size_t n) {
    std::vector<double> w(n);
    const double dn = static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / dn;
        w[i] = 0.42 - 0.5 * std::cos(a) + 0.08 * std::cos(2.0 * a);
    }
    return w;
}

Spectrum periodogram_power(const Signal& sig) {
    require_signal(sig);
    const std::size_t n = sig.size();
    if (n < 2) {
        throw DomainError("periodogram needs at least two samples");
    }
    const auto win = blackman_periodic(n);
    std::vector<double> xw(n);
    for (std::size_t i = 0; i < n; ++i) xw[i] = sig.x[i] * win[i];

    Spectrum s;
    s.nfft = 2 * n;
    s.window_sum = std::accumulate(win.begin(), win.end(), 0.0);
    detail::RealFft fft(s.nfft);
    s.power = one_sided_power(fft.forward(xw), s.nfft);
    const double gain2 = s.window_sum * s.window_sum;
    s.freq_hz.resize(s.power.size());
    s.power_db.resize(s.power.size());
    for (std::size_t k = 0; k < s.power.size(); ++k) {
        s.power[k] /= gain2;
        s.power_db[k] = to_db(s.power[k]);
        s.freq_hz[k] = static_cast<double>(k) * sig.fs / static_cast<double>(s.nfft);
    }
    return s;
}

std::size_t SpectralConfig::hop() const {
    return static_cast<std::size_t>(std::llround(static_cast<double>(winlen) / 4.0));
}

std::size_t SpectralConfig::nfft() const { return 2 * winlen; }

void SpectralConfig::validate() const {
    if (winlen == 0 || hop() == 0 || hop() > winlen || winlen > nfft()) {
        throw ConfigError("spectral config needs 0 < hop <= winlen <= nfft (winlen " +
                          std::to_string(winlen) + ")");
    }
}

std::size_t frame_count(std::size_t n, std::size_t winlen, std::size_t hop) {
    if (n < winlen) return 0;
    return (n - winlen) / hop + 1;
}

std::pair<double, double> Spectrogram::display_range() const {
    double peak = -std::numeric_limits<double>::infinity();
    for (double v : power_db.values) peak = std::max(peak, v);
    return {std::max(-120.0, peak - 90.0), peak};
}

Spectrogram spectrogram(const Signal& sig, const SpectralConfig& cfg) {
    require_signal(sig);
    cfg.validate();
    const std::size_t n = sig.size();
    if (n < cfg.winlen) {
        throw DomainError("signal shorter than the analysis window");
    }
    const std::size_t hop = cfg.hop();
    const std::size_t nfft = cfg.nfft();
    const std::size_t frames = frame_count(n, cfg.winlen, hop);
    const auto win = blackman_periodic(cfg.winlen);
    double win_energy = 0.0;
    for (double w : win) win_energy += w * w;
    const double scale = 1.0 / (static_cast<double>(nfft) * win_energy);

    detail::RealFft fft(nfft);
    Spectrogram out;
    out.freq_hz.resize(fft.bins());
    for (std::size_t k = 0; k < fft.bins(); ++k) {
        out.freq_hz[k] = static_cast<double>(k) * sig.fs / static_cast<double>(nfft);
    }
    out.time_s.resize(frames);
    out.power_db = Grid{fft.bins(), frames, std::vector<double>(fft.bins() * frames)};

    std::vector<double> xw(cfg.winlen);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < cfg.winlen; ++i) xw[i] = sig.x[start + i] * win[i];
        const auto p = one_sided_power(fft.forward(xw), nfft);
        for (std::size_t k = 0; k < p.size(); ++k) {
            out.power_db.at(k, f) = to_db(p[k] * scale);
        }
        out.time_s[f] = (static_cast<double>(start) + static_cast<double>(cfg.winlen) / 2.0) / sig.fs;
    }
    return out;
}

Cepstrogram cepstrogram(const Signal& sig, const SpectralConfig& cfg) {
    require_signal(sig);
    cfg.validate();
    const std::size_t n = sig.size();
    const std::size_t wlen = cfg.winlen;
    if (n < wlen) {
        throw DomainError("signal shorter than the analysis window");
    }
    const std::size_t hop = cfg.hop();
    const std::size_t frames = frame_count(n, wlen, hop);
    const auto win = blackman_periodic(wlen);

    // Unique half of the (even) real cepstrum, then drop quefrencies < 1 ms.
    const std::size_t half = (wlen + 2) / 2;
    std::size_t first = 0;
    while (first < half && static_cast<double>(first) / sig.fs < 1e-3) ++first;

    Cepstrogram out;
    for (std::size_t q = first; q < half; ++q) {
        out.quefrency_ms.push_back(static_cast<double>(q) / sig.fs * 1000.0);
    }
    const std::size_t rows = out.quefrency_ms.size();
    out.coeffs = Grid{rows, frames, std::vector<double>(rows * frames)};
    out.time_s.resize(frames);

    detail::RealFft fft(wlen);
    std::vector<double> xw(wlen);
    for (std::size_t f = 0; f < frames; ++f) {
        const std::size_t start = f * hop;
        for (std::size_t i = 0; i < wlen; ++i) xw[i] = sig.x[start + i] * win[i];
        auto spec = fft.forward(xw);
        double peak = 0.0;
        for (const auto& c : spec) peak = std::max(peak, std::abs(c));
        const double floor = std::max(1e-12 * peak, std::numeric_limits<double>::min());
        for (auto& c : spec) c = std::log(std::max(std::abs(c), floor));
        const auto ceps = fft.inverse(spec);
        for (std::size_t r = 0; r < rows; ++r) {
            out.coeffs.at(r, f) = ceps[first + r];
        }
        out.time_s[f] = (static_cast<double>(start) + static_cast<double>(wlen) / 2.0) / sig.fs;
    }
    return out;
}

std::array<std::string_view, kStatRows> stat_labels() {
    return {"Max value (V)",          "Min value (V)",          "Mean value (V)",  "RMS value (V)",
            "Dynamic range, DR (dB)", "Crest factor, CF (dB)", "Signal duration", "Autocorrelation time (s)"};
}

std::array<double, kStatRows> stat_values(const SignalStats& s) {
    return {s.max_v, s.min_v, s.mean_v, s.rms_v, s.dr_db, s.cf_db, s.duration_s, s.autocorr_time_s};
}

std::array<RatioRow, kStatRows> ratio_table(const SignalStats& candidate, const SignalStats& reference) {
    const auto labels = stat_labels();
    const auto cand = stat_values(candidate);
    const auto ref = stat_values(reference);
    std::array<RatioRow, kStatRows> rows;
    for (std::size_t i = 0; i < kStatRows; ++i) {
        rows[i].property = std::string(labels[i]);
        rows[i].candidate = cand[i];
        rows[i].reference = ref[i];
        if (ref[i] != 0.0) rows[i].ratio = cand[i] / ref[i];
    }
    return rows;
}

}  // namespace voiptap::analysis
