#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "voiptap/analysis.hpp"

namespace voiptap::cli {

nlohmann::json stats_to_json(const analysis::SignalStats& s);
analysis::SignalStats stats_from_json(const nlohmann::json& j);

// Two-column "property / value" table in the row order of the stats record.
void print_stats_table(std::ostream& os, const analysis::SignalStats& s);

void print_ratio_table(std::ostream& os,
                       const std::array<analysis::RatioRow, analysis::kStatRows>& rows);
nlohmann::json ratios_to_json(const std::array<analysis::RatioRow, analysis::kStatRows>& rows);

// CSV artifacts: header row, then one numeric record per line. Grids are
// written as (row coordinate, column coordinate, value) triplets.
void write_spectrum_csv(const std::filesystem::path& p, const analysis::Spectrum& s);
void write_spectrogram_csv(const std::filesystem::path& p, const analysis::Spectrogram& s);
void write_cepstrogram_csv(const std::filesystem::path& p, const analysis::Cepstrogram& c);
void write_histogram_csv(const std::filesystem::path& p, const analysis::HistogramSpec& h);
void write_correlogram_csv(const std::filesystem::path& p, const analysis::Correlogram& c);

}  // namespace voiptap::cli
