#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace voiptap::analysis {

struct Signal {
    std::vector<double> x;
    double fs = 16000.0;

    std::size_t size() const noexcept { return x.size(); }
};

// Dense matrix, row-major. Spectral products use frequency (or quefrency)
// rows and time columns.
struct Grid {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

enum class Normalization { none, peak, rms };
Normalization parse_normalization(std::string_view s);

// Removes the least-squares straight line. Requires at least two samples.
Signal detrend(const Signal& sig);

// peak: max|x| = 1. rms: sample standard deviation = 1.
Signal normalize(const Signal& sig, Normalization mode);

// 10 log10(p2 / p1) and 20 log10(|v2| / |v1|).
double db_power(double p2, double p1);
double db_volt(double v2, double v1);

double mean_value(std::span<const double> x);
// Standard deviation with the N - 1 denominator (0 for a single sample).
double sample_std(std::span<const double> x);
double true_rms(std::span<const double> x);

// Normalized autocorrelation over lags -(N-1)..(N-1). rx[k] holds lag
// k - (N - 1), so rx[N - 1] is the zero lag and equals 1.
struct Correlogram {
    std::vector<double> rx;
    std::size_t n = 0;
    double fs = 0.0;

    long lag(std::size_t index) const { return static_cast<long>(index) - static_cast<long>(n) + 1; }
    double tau(std::size_t index) const { return static_cast<double>(lag(index)) / fs; }
    double at_lag(long k) const { return rx[static_cast<std::size_t>(k + static_cast<long>(n) - 1)]; }
};

Correlogram autocorr(const Signal& sig);

// (ind - N) / fs, where ind is the last 1-based index on the full lag axis
// with rx > threshold and the zero lag sits at index N.
double autocorr_time(const Correlogram& corr, double threshold = 0.05);

struct SignalStats {
    double max_v = 0.0;
    double min_v = 0.0;
    double mean_v = 0.0;
    double rms_v = 0.0;  // sample standard deviation, not the true RMS
    double dr_db = 0.0;
    double cf_db = 0.0;
    double duration_s = 0.0;
    double autocorr_time_s = 0.0;

    friend bool operator==(const SignalStats&, const SignalStats&) = default;
};

// DR = 20 log10(max|x| / min|nonzero x|), CF = 20 log10(max|x| / std).
// Throws DegenerateSignalError for an all-zero signal (DR undefined) and for a
// zero standard deviation (CF undefined).
SignalStats stats(const Signal& sig);

struct HistogramSpec {
    std::vector<double> edges;  // bins + 1 values
    std::vector<std::size_t> counts;
};

std::size_t histogram_bins(std::size_t n);

// round(sqrt(N/10)) equal-width bins spanning [min x, max x]. Requires N >= 10.
HistogramSpec histogram(const Signal& sig);

// Periodic Blackman window, length n.
std::vector<double> blackman_periodic(std::size_t n);

struct Spectrum {
    std::vector<double> freq_hz;
    std::vector<double> power;     // linear
    std::vector<double> power_db;  // 10 log10(power)
    double window_sum = 0.0;       // sum of window samples
    std::size_t nfft = 0;
};

// One full-length periodic Blackman window, nfft = 2N, one-sided power
// scaled by the window's coherent gain: a bin-aligned sine of amplitude A
// peaks at A^2 / 2.
Spectrum periodogram_power(const Signal& sig);

struct SpectralConfig {
    std::size_t winlen = 1024;

    std::size_t hop() const;
    std::size_t nfft() const;
    void validate() const;
};

struct Spectrogram {
    std::vector<double> time_s;  // frame centres
    std::vector<double> freq_hz;
    Grid power_db;               // freq rows x time cols

    // Colour range used for display: [max(-120, peak - 90), peak].
    std::pair<double, double> display_range() const;
};

std::size_t frame_count(std::size_t n, std::size_t winlen, std::size_t hop);

// One-sided power per frame, scaled so the bins of a frame sum to the
// window-weighted mean square of that frame.
Spectrogram spectrogram(const Signal& sig, const SpectralConfig& cfg = {});

struct Cepstrogram {
    std::vector<double> time_s;
    std::vector<double> quefrency_ms;  // all >= 1 ms
    Grid coeffs;                       // quefrency rows x time cols
};

// Real cepstrum per windowed frame (winlen-point transform), log magnitude
// floored at 1e-12 of the frame's peak magnitude. Quefrencies below 1 ms
// are dropped.
Cepstrogram cepstrogram(const Signal& sig, const SpectralConfig& cfg = {});

struct RatioRow {
    std::string property;
    double candidate = 0.0;
    double reference = 0.0;
    std::optional<double> ratio;  // nullopt when the reference entry is 0
};

inline constexpr std::size_t kStatRows = 8;

std::array<std::string_view, kStatRows> stat_labels();
std::array<double, kStatRows> stat_values(const SignalStats& s);

std::array<RatioRow, kStatRows> ratio_table(const SignalStats& candidate, const SignalStats& reference);

}  // namespace voiptap::analysis
