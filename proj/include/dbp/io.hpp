#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbp/sequence.hpp"

namespace dbp::io {

inline constexpr const char* kSoftwareVersion = "0.1.0";
inline constexpr int kReportSchemaVersion = 1;

// Sequence text: '0', '1', '-' (missing); whitespace ignored; '#' starts a
// comment running to the end of the line.
BinarySequence parse_sequence_text(std::string_view text);
std::string serialize_sequence_text(const BinarySequence& seq, std::size_t line_width = 80);

struct Exclusion {
  int year = 0;
  std::optional<std::string> winner;  // empty: every row of that year
};

struct Aggregates {
  std::size_t usable = 0;
  std::size_t zeros = 0;
  std::size_t ones = 0;
};

struct LabelConfig {
  std::string label0;
  std::string label1;
  std::vector<Exclusion> exclusions;
  std::optional<Aggregates> expected;
};

LabelConfig parse_label_config(const nlohmann::json& j);
LabelConfig load_label_config(const std::filesystem::path& path);

struct LabeledSeries {
  int first_year = 0;
  BinarySequence sequence;  // one position per calendar year from first_year
  std::size_t excluded_rows = 0;

  int last_year() const { return first_year + static_cast<int>(sequence.size()) - 1; }
};

/// CSV with header `year,winner`. Rows matching an exclusion are dropped,
/// then years must be strictly increasing; blank winners and skipped years
/// become missing positions.
LabeledSeries parse_labeled_series(std::string_view text, const LabelConfig& config);
LabeledSeries load_labeled_series(const std::filesystem::path& path, const LabelConfig& config);
std::string serialize_labeled_series(const LabeledSeries& series, const LabelConfig& config);

Aggregates aggregates(const BinarySequence& seq);
/// Throws DataError when the series does not match the configured aggregates.
void check_aggregates(const LabeledSeries& series, const LabelConfig& config);

std::string read_file(const std::filesystem::path& path);
std::string sha256_hex(std::string_view data);

/// Report envelope: schema version, software version, command, input digest,
/// seed and results. generated_at is the only field that varies between
/// identical runs.
nlohmann::json make_report(std::string_view command, std::string_view inputs_digest, std::optional<std::uint64_t> seed,
                           nlohmann::json results);

}  // namespace dbp::io
