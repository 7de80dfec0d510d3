#include "dbp/io.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "dbp/error.hpp"

namespace dbp::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

}  // namespace

BinarySequence parse_sequence_text(std::string_view text) {
  BinarySequence seq;
  std::size_t line = 1, column = 0;
  bool in_comment = false;
  for (char c : text) {
    ++column;
    if (c == '\n') {
      ++line;
      column = 0;
      in_comment = false;
      continue;
    }
    if (in_comment) continue;
    switch (c) {
      case '0': seq.push_back(Obs::zero); break;
      case '1': seq.push_back(Obs::one); break;
      case '-': seq.push_back(Obs::missing); break;
      case '#': in_comment = true; break;
      case ' ':
      case '\t':
      case '\r': break;
      default:
        throw DataError(std::string("unexpected character '") + c + "' in sequence text", line, column);
    }
  }
  if (seq.observed_count() == 0) throw DataError("sequence text contains no observations");
  return seq;
}

std::string serialize_sequence_text(const BinarySequence& seq, std::size_t line_width) {
  std::string out;
  std::size_t col = 0;
  for (Obs o : seq.positions()) {
    out += o == Obs::zero ? '0' : o == Obs::one ? '1' : '-';
    if (line_width != 0 && ++col == line_width) {
      out += '\n';
      col = 0;
    }
  }
  if (col != 0 || out.empty()) out += '\n';
  return out;
}

LabelConfig parse_label_config(const nlohmann::json& j) {
  try {
    LabelConfig cfg;
    cfg.label0 = j.at("label0").get<std::string>();
    cfg.label1 = j.at("label1").get<std::string>();
    if (cfg.label0.empty() || cfg.label1.empty() || cfg.label0 == cfg.label1)
      throw DataError("label0 and label1 must be distinct non-empty strings");
    if (j.contains("exclude")) {
      for (const auto& e : j.at("exclude")) {
        Exclusion ex;
        ex.year = e.at("year").get<int>();
        if (e.contains("winner")) ex.winner = e.at("winner").get<std::string>();
        cfg.exclusions.push_back(ex);
      }
    }
    if (j.contains("expect")) {
      const auto& e = j.at("expect");
      cfg.expected = Aggregates{e.at("usable").get<std::size_t>(), e.at("zeros").get<std::size_t>(),
                                e.at("ones").get<std::size_t>()};
    }
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("invalid label config: ") + e.what());
  }
}

LabelConfig load_label_config(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  try {
    return parse_label_config(nlohmann::json::parse(text));
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LabeledSeries parse_labeled_series(std::string_view text, const LabelConfig& config) {
  const auto lines = split_lines(text);
  std::size_t header_line = 0;
  while (header_line < lines.size() && trim(lines[header_line]).empty()) ++header_line;
  if (header_line == lines.size()) throw DataError("labeled series is empty");
  if (trim(lines[header_line]) != "year,winner")
    throw DataError("expected header 'year,winner'", header_line + 1, 1);

  LabeledSeries series;
  std::optional<int> previous;
  for (std::size_t li = header_line + 1; li < lines.size(); ++li) {
    const std::string_view row = trim(lines[li]);
    if (row.empty()) continue;
    const auto comma = row.find(',');
    if (comma == std::string_view::npos) throw DataError("expected 'year,winner'", li + 1, 1);
    const std::string_view year_text = trim(row.substr(0, comma));
    const std::string_view winner = trim(row.substr(comma + 1));
    int year = 0;
    const auto [ptr, ec] = std::from_chars(year_text.data(), year_text.data() + year_text.size(), year);
    if (ec != std::errc{} || ptr != year_text.data() + year_text.size())
      throw DataError("invalid year '" + std::string(year_text) + "'", li + 1, 1);

    bool excluded = false;
    for (const auto& ex : config.exclusions)
      if (ex.year == year && (!ex.winner || *ex.winner == winner)) excluded = true;
    if (excluded) {
      ++series.excluded_rows;
      continue;
    }

    Obs obs;
    if (winner.empty()) obs = Obs::missing;
    else if (winner == config.label0) obs = Obs::zero;
    else if (winner == config.label1) obs = Obs::one;
    else throw DataError("unknown label '" + std::string(winner) + "'", li + 1, comma + 2);

    if (previous) {
      if (year <= *previous) throw DataError("years must be strictly increasing", li + 1, 1);
      for (int gap = *previous + 1; gap < year; ++gap) series.sequence.push_back(Obs::missing);
    } else {
      series.first_year = year;
    }
    series.sequence.push_back(obs);
    previous = year;
  }
  if (series.sequence.observed_count() == 0) throw DataError("labeled series has no usable observations");
  return series;
}

LabeledSeries load_labeled_series(const std::filesystem::path& path, const LabelConfig& config) {
  return parse_labeled_series(read_file(path), config);
}

std::string serialize_labeled_series(const LabeledSeries& series, const LabelConfig& config) {
  std::string out = "year,winner\n";
  int year = series.first_year;
  for (Obs o : series.sequence.positions()) {
    out += std::to_string(year++) + ",";
    if (o == Obs::zero) out += config.label0;
    else if (o == Obs::one) out += config.label1;
    out += '\n';
  }
  return out;
}

Aggregates aggregates(const BinarySequence& seq) {
  return Aggregates{seq.observed_count(), seq.count(0), seq.count(1)};
}

void check_aggregates(const LabeledSeries& series, const LabelConfig& config) {
  if (!config.expected) return;
  const Aggregates got = aggregates(series.sequence);
  const Aggregates& want = *config.expected;
  if (got.usable != want.usable || got.zeros != want.zeros || got.ones != want.ones) {
    std::ostringstream msg;
    msg << "series aggregates " << got.usable << "/" << got.zeros << "/" << got.ones << " (usable/zeros/ones) do not "
        << "match the configured " << want.usable << "/" << want.zeros << "/" << want.ones;
    throw DataError(msg.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::data, "SHA-256 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xf];
  }
  return out;
}

nlohmann::json make_report(std::string_view command, std::string_view inputs_digest, std::optional<std::uint64_t> seed,
                           nlohmann::json results) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

  nlohmann::json report;
  report["schema_version"] = kReportSchemaVersion;
  report["software_version"] = kSoftwareVersion;
  report["command"] = std::string(command);
  report["inputs_digest"] = std::string(inputs_digest);
  report["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
  report["generated_at"] = stamp;
  report["results"] = std::move(results);
  return report;
}

}  // namespace dbp::io
