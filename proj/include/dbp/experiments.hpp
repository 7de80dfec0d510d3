#pragma once

// Replays of the reference studies: parameter recovery for known tables,
// interval shrinkage with sequence length, word-length selection rates, and
// the boat-race application. Every statistic is computed from module output;
// nothing here knows the published numbers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dbp/inference.hpp"
#include "dbp/io.hpp"
#include "dbp/mcmc.hpp"
#include "dbp/process.hpp"

namespace dbp::experiments {

/// m=2 anti-clustered generator {p_00^01, p_01^11, p_10^01, p_11^11}.
TransitionTable anti_clustered_table();
/// m=3 clustered generator.
TransitionTable clustered_table();

struct EstimationStudy {
  TransitionTable truth;
  int n = 0;
  std::size_t replicates = 0;
  std::vector<std::vector<double>> estimates;                    // [replicate][edge], MH posterior means
  std::vector<std::vector<std::pair<double, double>>> intervals;  // [replicate][edge], 95% MH intervals
  double mean_abs_error = 0.0;                                   // over replicates and edges
  std::vector<std::size_t> coverage;                             // replicates whose interval holds the truth
  std::vector<double> average_estimate;
  std::vector<std::pair<double, double>> estimate_spread;  // 2.5% / 97.5% quantiles of estimates
  std::vector<double> mean_interval_width;
  std::vector<double> mean_acceptance;
};

EstimationStudy run_estimation_study(const TransitionTable& truth, int n, std::size_t replicates, std::uint64_t seed,
                                     MhConfig mh);

struct SingleFit {
  TransitionTable truth;
  BinarySequence sequence;
  EvidenceReport evidence;
  MhResult mh;
  double mean_abs_error = 0.0;
  bool all_covered = false;
};

/// One sequence: select m, then sample transition probabilities at the true m.
SingleFit run_single_fit(const TransitionTable& truth, int n, std::uint64_t seed, const MhConfig& mh, int m_max,
                         EvidenceBasis basis);

struct SelectionStudy {
  TransitionTable truth;
  int n = 0;
  int m_max = 0;
  std::vector<int> selected;           // per replicate
  std::vector<std::size_t> histogram;  // histogram[m - 1]
  double fraction(int m) const;
};

SelectionStudy run_selection_study(const TransitionTable& truth, int n, std::size_t replicates, std::uint64_t seed,
                                   int m_max, EvidenceBasis basis);

struct BoatRaceFit {
  int m = 0;
  PosteriorSpec posterior;
  StationaryDistribution stationary;  // of the posterior-mean table
  double predict_paper_marginal = 0.0;
  double predict_conditional = 0.0;
};

struct BoatRaceStudy {
  io::LabeledSeries series;
  io::Aggregates aggregates;
  EvidenceReport evidence;
  std::vector<BoatRaceFit> fits;  // m = 2 and m = 3
};

/// Fits the labeled series at m = 2 and 3 with the given prior rule and
/// predicts the year after the last one.
BoatRaceStudy run_boat_race_study(const io::LabeledSeries& series, int m_max, EvidenceBasis basis,
                                  const PriorRule& prior_rule = uniform_prior_rule());

nlohmann::json to_json(const EstimationStudy& s);
nlohmann::json to_json(const SingleFit& s);
nlohmann::json to_json(const SelectionStudy& s);
nlohmann::json to_json(const BoatRaceStudy& s);
nlohmann::json to_json(const EvidenceReport& r);
nlohmann::json to_json(const PosteriorSpec& p, double level);

std::string to_csv(const EstimationStudy& s);
std::string to_csv(const SelectionStudy& s);
std::string to_csv(const BoatRaceStudy& s);

struct Options {
  std::uint64_t seed = 20220403;
  std::optional<std::size_t> replicates;
  std::filesystem::path data_dir;  // holds boat_race.csv and boat_race.json
  std::optional<std::filesystem::path> output_dir;
  int m_max = kDefaultMaxWordLength;
  EvidenceBasis basis = EvidenceBasis::full_data;
  MhConfig mh;
};

const std::vector<std::string>& study_names();

struct StudyOutput {
  nlohmann::json results;
  std::vector<std::pair<std::string, std::string>> csv_files;  // file name, contents
  std::string inputs_digest;
};

/// Runs a named study: teinf-left, teinf-right, teinf2, hist2i, boatrace.
StudyOutput run_study(const std::string& name, const Options& options);

}  // namespace dbp::experiments
