#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mfh/mf_data.hpp"

namespace mfh {

/// 17 significant digits; round-trips every double. Missing values print empty.
std::string format_double(double v);

/// Splits one CSV line on commas. Handles double-quoted cells without embedded newlines.
std::vector<std::string> split_csv_line(const std::string& line);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// HF file: header `date,value`, one row per observation. Empty cells or
/// `NA`/`NaN` are missing.
RawSeries read_hf_csv(const std::filesystem::path& path, const std::string& label = "hf");
std::string hf_to_csv(const RawSeries& series);

/// FRED-MD style table: header of series codes (first cell is the date column),
/// optional second row of integer T-codes, then one row per month.
struct LfTable {
    std::vector<std::string> labels;
    std::optional<std::vector<int>> tcodes;
    std::vector<RawSeries> series;  // same timestamps for all
};

LfTable read_lf_csv(const std::filesystem::path& path);
std::string lf_to_csv(const LfTable& table, bool write_tcodes);

/// Alignment log as a JSON array of {period, action, position, value}.
std::string alignment_log_to_json(const std::vector<AlignmentRecord>& log);

/// Dataset bundle: a single CSV with header `period,position,x,<labels...>`,
/// one row per HF observation; LF values repeat within a period. The first
/// line is a comment `# m=<m>`.
std::string dataset_to_csv(const MFDataset& ds);
MFDataset dataset_from_csv(const std::string& text);

}  // namespace mfh
