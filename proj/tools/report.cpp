#include "report.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>

#include "voiptap/error.hpp"

namespace voiptap::cli {
namespace {

constexpr const char* kKeys[analysis::kStatRows] = {
    "max_v", "min_v", "mean_v", "rms_v", "dr_db", "cf_db", "duration_s", "autocorr_time_s"};

std::ofstream open_csv(const std::filesystem::path& p, const char* header) {
    std::ofstream os(p);
    if (!os) {
        throw IoError("cannot open for writing", p.string());
    }
    os << header << '\n';
    os << std::setprecision(10);
    return os;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

nlohmann::json stats_to_json(const analysis::SignalStats& s) {
    const auto values = analysis::stat_values(s);
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < analysis::kStatRows; ++i) {
        j[kKeys[i]] = values[i];
    }
    return j;
}

analysis::SignalStats stats_from_json(const nlohmann::json& j) {
    analysis::SignalStats s;
    double* fields[analysis::kStatRows] = {&s.max_v, &s.min_v, &s.mean_v, &s.rms_v,
                                           &s.dr_db, &s.cf_db, &s.duration_s, &s.autocorr_time_s};
    for (std::size_t i = 0; i < analysis::kStatRows; ++i) {
        *fields[i] = j.at(kKeys[i]).get<double>();
    }
    return s;
}

void print_stats_table(std::ostream& os, const analysis::SignalStats& s) {
    const auto labels = analysis::stat_labels();
    const auto values = analysis::stat_values(s);
    const char* units[analysis::kStatRows] = {"", "", "", "", " dB", " dB", " s", " s"};
    for (std::size_t i = 0; i < analysis::kStatRows; ++i) {
        os << std::left << std::setw(28) << labels[i] << fmt(values[i]) << units[i] << '\n';
    }
}

void print_ratio_table(std::ostream& os,
                       const std::array<analysis::RatioRow, analysis::kStatRows>& rows) {
    os << std::left << std::setw(28) << "Property" << std::setw(16) << "Candidate" << std::setw(16)
       << "Reference" << "Ratio\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(28) << r.property << std::setw(16) << fmt(r.candidate)
           << std::setw(16) << fmt(r.reference);
        if (r.ratio) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.15g", *r.ratio);
            os << buf;
        } else {
            os << "undefined";
        }
        os << '\n';
    }
}

nlohmann::json ratios_to_json(const std::array<analysis::RatioRow, analysis::kStatRows>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        nlohmann::json j{{"property", rows[i].property},
                         {"key", kKeys[i]},
                         {"candidate", rows[i].candidate},
                         {"reference", rows[i].reference}};
        j["ratio"] = rows[i].ratio ? nlohmann::json(*rows[i].ratio) : nlohmann::json(nullptr);
        arr.push_back(std::move(j));
    }
    return arr;
}

void write_spectrum_csv(const std::filesystem::path& p, const analysis::Spectrum& s) {
    auto os = open_csv(p, "freq_hz,power_db");
    for (std::size_t k = 0; k < s.freq_hz.size(); ++k) {
        os << s.freq_hz[k] << ',' << s.power_db[k] << '\n';
    }
}

void write_spectrogram_csv(const std::filesystem::path& p, const analysis::Spectrogram& s) {
    auto os = open_csv(p, "freq_hz,time_s,power_db");
    for (std::size_t r = 0; r < s.power_db.rows; ++r) {
        for (std::size_t c = 0; c < s.power_db.cols; ++c) {
            os << s.freq_hz[r] << ',' << s.time_s[c] << ',' << s.power_db.at(r, c) << '\n';
        }
    }
}

void write_cepstrogram_csv(const std::filesystem::path& p, const analysis::Cepstrogram& cg) {
    auto os = open_csv(p, "quefrency_ms,time_s,coefficient");
    for (std::size_t r = 0; r < cg.coeffs.rows; ++r) {
        for (std::size_t c = 0; c < cg.coeffs.cols; ++c) {
            os << cg.quefrency_ms[r] << ',' << cg.time_s[c] << ',' << cg.coeffs.at(r, c) << '\n';
        }
    }
}

void write_histogram_csv(const std::filesystem::path& p, const analysis::HistogramSpec& h) {
    auto os = open_csv(p, "bin_low,bin_high,count");
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        os << h.edges[i] << ',' << h.edges[i + 1] << ',' << h.counts[i] << '\n';
    }
}

void write_correlogram_csv(const std::filesystem::path& p, const analysis::Correlogram& c) {
    auto os = open_csv(p, "lag_s,rx");
    for (std::size_t i = 0; i < c.rx.size(); ++i) {
        os << c.tau(i) << ',' << c.rx[i] << '\n';
    }
}

}  // namespace voiptap::cli
