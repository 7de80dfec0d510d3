#include "dbp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dbp/distribution.hpp"
#include "dbp/error.hpp"
#include "dbp/parallel.hpp"

namespace dbp::experiments {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t replicate_seed(std::uint64_t seed, std::uint64_t salt) { return seed ^ (kGolden * (salt + 1)); }

MhConfig replicate_mh(MhConfig mh, std::uint64_t seed, std::size_t replicate) {
  mh.seed = replicate_seed(seed, replicate);
  mh.threads = 1;
  return mh;
}

BinarySequence simulate_replicate(const TransitionTable& truth, const StationaryDistribution& stationary, int n,
                                  std::uint64_t seed, std::size_t replicate) {
  SimulationConfig cfg;
  cfg.n = static_cast<std::size_t>(n);
  cfg.seed = seed;
  cfg.stream = replicate;
  return simulate(truth, cfg, stationary);
}

nlohmann::json table_json(const TransitionTable& t) {
  std::vector<double> p(t.append_one().begin(), t.append_one().end());
  return {{"m", t.m()}, {"p", p}};
}

const char* basis_name(EvidenceBasis b) { return b == EvidenceBasis::full_data ? "full_data" : "conditional"; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

TransitionTable anti_clustered_table() { return TransitionTable(WordLength(2), {0.9, 0.25, 0.75, 0.1}); }

TransitionTable clustered_table() {
  return TransitionTable(WordLength(3), {0.1, 0.7, 0.5, 0.8, 0.2, 0.5, 0.3, 0.9});
}

EstimationStudy run_estimation_study(const TransitionTable& truth, int n, std::size_t replicates, std::uint64_t seed,
                                     MhConfig mh) {
  if (replicates == 0) throw InvalidArgument("estimation study needs at least one replicate");
  const auto stationary = stationary_distribution(truth);
  const WordLength m = truth.word_length();
  const std::size_t K = m.word_count();

  EstimationStudy s{truth, n, replicates, {}, {}, 0.0, {}, {}, {}, {}, {}};
  s.estimates.assign(replicates, std::vector<double>(K));
  s.intervals.assign(replicates, std::vector<std::pair<double, double>>(K));
  std::vector<std::vector<double>> acceptance(replicates, std::vector<double>(K));

  parallel_for(replicates, [&](std::size_t r) {
    const auto seq = simulate_replicate(truth, stationary, n, seed, r);
    const auto counts = count_transitions(seq, m);
    const auto result = mh_sample_posterior(counts, BetaPrior::uniform(m), replicate_mh(mh, seed, r));
    for (std::size_t i = 0; i < K; ++i) {
      s.estimates[r][i] = result.edges[i].mean;
      s.intervals[r][i] = {result.edges[i].ci_low, result.edges[i].ci_high};
      acceptance[r][i] = result.edges[i].acceptance_rate;
    }
  });

  s.coverage.assign(K, 0);
  s.average_estimate.assign(K, 0.0);
  s.mean_interval_width.assign(K, 0.0);
  s.mean_acceptance.assign(K, 0.0);
  double abs_error = 0.0;
  for (std::size_t r = 0; r < replicates; ++r) {
    for (std::size_t i = 0; i < K; ++i) {
      const double truth_i = truth.p(static_cast<std::uint32_t>(i));
      abs_error += std::abs(s.estimates[r][i] - truth_i);
      const auto [lo, hi] = s.intervals[r][i];
      if (lo <= truth_i && truth_i <= hi) ++s.coverage[i];
      s.average_estimate[i] += s.estimates[r][i];
      s.mean_interval_width[i] += hi - lo;
      s.mean_acceptance[i] += acceptance[r][i];
    }
  }
  const double R = static_cast<double>(replicates);
  s.mean_abs_error = abs_error / (R * static_cast<double>(K));
  for (std::size_t i = 0; i < K; ++i) {
    s.average_estimate[i] /= R;
    s.mean_interval_width[i] /= R;
    s.mean_acceptance[i] /= R;
    std::vector<double> column(replicates);
    for (std::size_t r = 0; r < replicates; ++r) column[r] = s.estimates[r][i];
    s.estimate_spread.emplace_back(sample_quantile(column, 0.025), sample_quantile(column, 0.975));
  }
  return s;
}

SingleFit run_single_fit(const TransitionTable& truth, int n, std::uint64_t seed, const MhConfig& mh, int m_max,
                         EvidenceBasis basis) {
  const auto stationary = stationary_distribution(truth);
  auto seq = simulate_replicate(truth, stationary, n, seed, 0);
  auto evidence = select_word_length(seq, m_max, uniform_prior_rule(), basis);
  const auto counts = count_transitions(seq, truth.word_length());
  MhConfig cfg = mh;
  cfg.seed = replicate_seed(seed, 0);
  auto result = mh_sample_posterior(counts, BetaPrior::uniform(truth.word_length()), cfg);

  double err = 0.0;
  bool covered = true;
  for (std::uint32_t i = 0; i < truth.word_count(); ++i) {
    const auto& e = result.edges[i];
    err += std::abs(e.mean - truth.p(i));
    covered = covered && e.ci_low <= truth.p(i) && truth.p(i) <= e.ci_high;
  }
  err /= truth.word_count();
  return SingleFit{truth, std::move(seq), std::move(evidence), std::move(result), err, covered};
}

double SelectionStudy::fraction(int m) const {
  if (m < 1 || m > m_max || selected.empty()) return 0.0;
  return static_cast<double>(histogram[static_cast<std::size_t>(m - 1)]) / static_cast<double>(selected.size());
}

SelectionStudy run_selection_study(const TransitionTable& truth, int n, std::size_t replicates, std::uint64_t seed,
                                   int m_max, EvidenceBasis basis) {
  if (replicates == 0) throw InvalidArgument("selection study needs at least one replicate");
  WordLength{m_max};  // validates the range
  const auto stationary = stationary_distribution(truth);
  SelectionStudy s{truth, n, m_max, std::vector<int>(replicates, 0), std::vector<std::size_t>(m_max, 0)};
  parallel_for(replicates, [&](std::size_t r) {
    const auto seq = simulate_replicate(truth, stationary, n, seed, r);
    s.selected[r] = select_word_length(seq, m_max, uniform_prior_rule(), basis).selected;
  });
  for (int m : s.selected) ++s.histogram[static_cast<std::size_t>(m - 1)];
  return s;
}

BoatRaceStudy run_boat_race_study(const io::LabeledSeries& series, int m_max, EvidenceBasis basis,
                                  const PriorRule& prior_rule) {
  BoatRaceStudy s{series, io::aggregates(series.sequence), {}, {}};
  s.evidence = select_word_length(series.sequence, m_max, prior_rule, basis);
  for (int mv : {2, 3}) {
    const WordLength m(mv);
    const auto counts = count_transitions(series.sequence, m);
    auto post = posterior(counts, prior_rule(m));
    const auto table = post.mean_table();
    BoatRaceFit fit{mv, std::move(post), stationary_distribution(table), 0.0, 0.0};
    fit.predict_paper_marginal = predict_next(table, fit.stationary, series.sequence, PredictionMode::paper_marginal);
    fit.predict_conditional = predict_next(table, fit.stationary, series.sequence, PredictionMode::conditional);
    s.fits.push_back(std::move(fit));
  }
  return s;
}

nlohmann::json to_json(const EvidenceReport& r) {
  return {{"basis", basis_name(r.basis)},
          {"candidates", r.candidates},
          {"log_evidence", r.log_evidence},
          {"log_bayes_factor", r.log_bayes_factor},
          {"selected", r.selected}};
}

nlohmann::json to_json(const PosteriorSpec& p, double level) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::uint32_t i = 0; i < p.m.word_count(); ++i) {
    const auto [lo, hi] = p.credible_interval(i, level);
    const auto mode = p.mode(i);
    edges.push_back({{"word", i},
                     {"alpha", p.alpha[i]},
                     {"beta", p.beta[i]},
                     {"mean", p.mean(i)},
                     {"mode", mode ? nlohmann::json(*mode) : nlohmann::json(nullptr)},
                     {"ci_low", lo},
                     {"ci_high", hi},
                     {"no_data", static_cast<bool>(p.no_data[i])}});
  }
  return {{"m", p.m.value()}, {"level", level}, {"edges", edges}};
}

nlohmann::json to_json(const EstimationStudy& s) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::uint32_t i = 0; i < s.truth.word_count(); ++i) {
    edges.push_back({{"word", i},
                     {"truth", s.truth.p(i)},
                     {"average_estimate", s.average_estimate[i]},
                     {"estimate_q025", s.estimate_spread[i].first},
                     {"estimate_q975", s.estimate_spread[i].second},
                     {"coverage", s.coverage[i]},
                     {"mean_interval_width", s.mean_interval_width[i]},
                     {"mean_acceptance", s.mean_acceptance[i]}});
  }
  return {{"truth", table_json(s.truth)},   {"n", s.n}, {"replicates", s.replicates},
          {"mean_abs_error", s.mean_abs_error}, {"edges", edges}};
}

nlohmann::json to_json(const SingleFit& s) {
  nlohmann::json edges = nlohmann::json::array();
  for (std::uint32_t i = 0; i < s.truth.word_count(); ++i) {
    const auto& e = s.mh.edges[i];
    edges.push_back({{"word", i},
                     {"truth", s.truth.p(i)},
                     {"mean", e.mean},
                     {"ci_low", e.ci_low},
                     {"ci_high", e.ci_high},
                     {"acceptance_rate", e.acceptance_rate}});
  }
  return {{"truth", table_json(s.truth)},
          {"n", s.sequence.size()},
          {"evidence", to_json(s.evidence)},
          {"mean_abs_error", s.mean_abs_error},
          {"all_covered", s.all_covered},
          {"edges", edges}};
}

nlohmann::json to_json(const SelectionStudy& s) {
  nlohmann::json fractions = nlohmann::json::object();
  for (int m = 1; m <= s.m_max; ++m) fractions[std::to_string(m)] = s.fraction(m);
  return {{"truth", table_json(s.truth)},
          {"n", s.n},
          {"replicates", s.selected.size()},
          {"histogram", s.histogram},
          {"fractions", fractions}};
}

nlohmann::json to_json(const BoatRaceStudy& s) {
  nlohmann::json fits = nlohmann::json::array();
  for (const auto& f : s.fits) {
    fits.push_back({{"m", f.m},
                    {"posterior", to_json(f.posterior, 0.95)},
                    {"stationary_words", f.stationary.pi},
                    {"letter_marginal_0", f.stationary.letter_marginal(0)},
                    {"predict_next_paper_marginal", f.predict_paper_marginal},
                    {"predict_next_conditional", f.predict_conditional}});
  }
  return {{"first_year", s.series.first_year},
          {"last_year", s.series.last_year()},
          {"excluded_rows", s.series.excluded_rows},
          {"aggregates", {{"usable", s.aggregates.usable}, {"zeros", s.aggregates.zeros}, {"ones", s.aggregates.ones}}},
          {"evidence", to_json(s.evidence)},
          {"fits", fits}};
}

std::string to_csv(const EstimationStudy& s) {
  std::ostringstream os;
  os << "n,word,truth,average_estimate,estimate_q025,estimate_q975,coverage,mean_interval_width\n";
  for (std::uint32_t i = 0; i < s.truth.word_count(); ++i) {
    os << s.n << ',' << i << ',' << fmt(s.truth.p(i)) << ',' << fmt(s.average_estimate[i]) << ','
       << fmt(s.estimate_spread[i].first) << ',' << fmt(s.estimate_spread[i].second) << ',' << s.coverage[i] << ','
       << fmt(s.mean_interval_width[i]) << '\n';
  }
  return os.str();
}

std::string to_csv(const SelectionStudy& s) {
  std::ostringstream os;
  os << "m,count,fraction\n";
  for (int m = 1; m <= s.m_max; ++m) os << m << ',' << s.histogram[m - 1] << ',' << fmt(s.fraction(m)) << '\n';
  return os.str();
}

std::string to_csv(const BoatRaceStudy& s) {
  std::ostringstream os;
  os << "m,word,mean,mode,ci_low,ci_high\n";
  for (const auto& f : s.fits) {
    for (std::uint32_t i = 0; i < f.posterior.m.word_count(); ++i) {
      const auto [lo, hi] = f.posterior.credible_interval(i, 0.95);
      const auto mode = f.posterior.mode(i);
      os << f.m << ',' << i << ',' << fmt(f.posterior.mean(i)) << ',' << (mode ? fmt(*mode) : "") << ',' << fmt(lo)
         << ',' << fmt(hi) << '\n';
    }
  }
  return os.str();
}

const std::vector<std::string>& study_names() {
  static const std::vector<std::string> names{"teinf-left", "teinf-right", "teinf2", "hist2i", "boatrace"};
  return names;
}

StudyOutput run_study(const std::string& name, const Options& o) {
  StudyOutput out;
  out.inputs_digest = io::sha256_hex("study:" + name);
  if (name == "teinf-left" || name == "teinf-right") {
    const auto truth = name == "teinf-left" ? anti_clustered_table() : clustered_table();
    const auto fit = run_single_fit(truth, 200, o.seed, o.mh, o.m_max, o.basis);
    const auto study = run_estimation_study(truth, 200, o.replicates.value_or(100), o.seed, o.mh);
    out.results = {{"single_run", to_json(fit)}, {"replicated", to_json(study)}};
    out.csv_files.emplace_back(name + ".csv", to_csv(study));
  } else if (name == "teinf2") {
    nlohmann::json rows = nlohmann::json::array();
    std::string csv;
    for (int n : {50, 100, 200, 500}) {
      const auto study = run_estimation_study(anti_clustered_table(), n, o.replicates.value_or(100),
                                              replicate_seed(o.seed, static_cast<std::uint64_t>(n)), o.mh);
      rows.push_back(to_json(study));
      auto part = to_csv(study);
      csv += csv.empty() ? part : part.substr(part.find('\n') + 1);
    }
    out.results = {{"lengths", rows}};
    out.csv_files.emplace_back("teinf2.csv", csv);
  } else if (name == "hist2i") {
    const std::size_t reps = o.replicates.value_or(1000);
    const auto left = run_selection_study(anti_clustered_table(), 200, reps, o.seed, o.m_max, o.basis);
    const auto right = run_selection_study(clustered_table(), 200, reps, replicate_seed(o.seed, 3), o.m_max, o.basis);
    out.results = {{"basis", basis_name(o.basis)}, {"m2_table", to_json(left)}, {"m3_table", to_json(right)}};
    out.csv_files.emplace_back("hist2i_m2.csv", to_csv(left));
    out.csv_files.emplace_back("hist2i_m3.csv", to_csv(right));
  } else if (name == "boatrace") {
    const auto csv_path = o.data_dir / "boat_race.csv";
    const auto cfg_path = o.data_dir / "boat_race.json";
    const auto config = io::load_label_config(cfg_path);
    const auto series = io::load_labeled_series(csv_path, config);
    io::check_aggregates(series, config);
    out.inputs_digest = io::sha256_hex(io::read_file(csv_path) + io::read_file(cfg_path));
    const auto study = run_boat_race_study(series, o.m_max, o.basis);
    out.results = to_json(study);
    out.csv_files.emplace_back("boatrace_posteriors.csv", to_csv(study));
  } else {
    throw InvalidArgument("unknown study '" + name + "'");
  }
  return out;
}

}  // namespace dbp::experiments
