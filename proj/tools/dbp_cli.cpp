// dbp: command-line front end for the de Bruijn process library.
//
// Every subcommand prints a JSON report (or CSV for table-like results) to
// stdout. When an output directory is configured (--out-dir, or the
// DBP_OUTPUT_DIR environment variable) the same artifacts are also written
// there. Errors go to stderr as a JSON object; exit status is 0 on success,
// 1 for usage errors, 2 for data errors and 3 for failed verification.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dbp/distribution.hpp"
#include "dbp/error.hpp"
#include "dbp/experiments.hpp"
#include "dbp/inference.hpp"
#include "dbp/io.hpp"
#include "dbp/mcmc.hpp"
#include "dbp/process.hpp"
#ifdef DBP_WITH_ORACLE
#include "dbp/oracle.hpp"
#endif

#ifndef DBP_DEFAULT_DATA_DIR
#define DBP_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum class Exit { ok = 0, usage = 1, data = 2, verification = 3 };

struct Common {
  int m = 2;
  std::uint64_t seed = 1;
  std::string prior_alpha = "1";
  std::string prior_beta = "1";
  std::string output = "json";
  std::string out_dir;
  std::string input;
  std::string series;
  std::string label_config;
  std::string basis = "full-data";
};

struct Artifact {
  json report;
  std::string csv;  // empty when the command has no tabular form
  std::vector<std::pair<std::string, std::string>> extra_files;
};

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw dbp::InvalidArgument(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw dbp::InvalidArgument(flag + " is empty");
  return out;
}

dbp::EvidenceBasis parse_basis(const std::string& s) {
  if (s == "full-data") return dbp::EvidenceBasis::full_data;
  if (s == "conditional") return dbp::EvidenceBasis::conditional;
  throw dbp::InvalidArgument("--evidence-basis must be full-data or conditional");
}

dbp::PriorRule prior_rule(const Common& c) {
  const auto a = parse_list(c.prior_alpha, "--prior-alpha");
  const auto b = parse_list(c.prior_beta, "--prior-beta");
  return [a, b](dbp::WordLength m) { return dbp::BetaPrior::make(m, a, b); };
}

struct LoadedInput {
  dbp::BinarySequence sequence;
  std::string digest;
};

LoadedInput load_input(const Common& c) {
  if (!c.input.empty() && !c.series.empty()) throw dbp::InvalidArgument("give either --input or --series, not both");
  if (!c.input.empty()) {
    const auto text = dbp::io::read_file(c.input);
    return {dbp::io::parse_sequence_text(text), dbp::io::sha256_hex(text)};
  }
  if (!c.series.empty()) {
    if (c.label_config.empty()) throw dbp::InvalidArgument("--series requires --label-config");
    const auto config = dbp::io::load_label_config(c.label_config);
    const auto text = dbp::io::read_file(c.series);
    auto series = dbp::io::parse_labeled_series(text, config);
    dbp::io::check_aggregates(series, config);
    return {std::move(series.sequence), dbp::io::sha256_hex(text + dbp::io::read_file(c.label_config))};
  }
  throw dbp::InvalidArgument("an input is required: --input FILE or --series FILE --label-config FILE");
}

dbp::TransitionTable parse_table(const std::string& text, const Common& c, bool m_given) {
  auto p = parse_list(text, "--table");
  int m = 0;
  while ((std::size_t{1} << m) < p.size()) ++m;
  if ((std::size_t{1} << m) != p.size() || m == 0)
    throw dbp::InvalidArgument("--table needs 2^m entries, got " + std::to_string(p.size()));
  if (m_given && m != c.m)
    throw dbp::InvalidArgument("--table has 2^" + std::to_string(m) + " entries but --m is " + std::to_string(c.m));
  return dbp::TransitionTable(dbp::WordLength(m), std::move(p));
}

std::string letters_string(const dbp::BinarySequence& seq) {
  std::string s;
  for (auto o : seq.positions()) s += o == dbp::Obs::missing ? '-' : (o == dbp::Obs::one ? '1' : '0');
  return s;
}

json counts_json(const dbp::TransitionCounts& counts) {
  json words = json::array();
  for (std::uint32_t i = 0; i < counts.m.word_count(); ++i)
    words.push_back({{"word", i}, {"n0", counts.n0[i]}, {"n1", counts.n1[i]}});
  return {{"m", counts.m.value()}, {"total", counts.total()}, {"words", words}};
}

std::string counts_csv(const dbp::TransitionCounts& counts) {
  std::ostringstream os;
  os << "word,n0,n1\n";
  for (std::uint32_t i = 0; i < counts.m.word_count(); ++i) os << i << ',' << counts.n0[i] << ',' << counts.n1[i] << '\n';
  return os.str();
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

fs::path output_dir(const Common& c) {
  if (!c.out_dir.empty()) return c.out_dir;
  if (const char* env = std::getenv("DBP_OUTPUT_DIR"); env && *env) return env;
  return {};
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw dbp::DataError("cannot write " + path.string());
  f << content;
}

void emit(const std::string& command, const Common& c, const Artifact& a) {
  const bool csv = c.output == "csv" && !a.csv.empty();
  const std::string body = csv ? a.csv : a.report.dump(2) + "\n";
  std::cout << body;
  const auto dir = output_dir(c);
  if (dir.empty()) return;
  fs::create_directories(dir);
  write_file(dir / (command + (csv ? ".csv" : ".json")), body);
  for (const auto& [name, content] : a.extra_files) write_file(dir / name, content);
}

void print_error(const std::string& kind, const std::string& message, const json& extra = json::object()) {
  json err = {{"kind", kind}, {"message", message}};
  err.update(extra);
  std::cerr << json{{"error", err}}.dump() << "\n";
}

void add_common(CLI::App* sub, Common& c, bool needs_input) {
  sub->add_option("--m", c.m, "Word length")->check(CLI::Range(1, dbp::kDefaultMaxWordLength));
  sub->add_option("--seed", c.seed, "Random seed");
  sub->add_option("--prior-alpha", c.prior_alpha, "Beta prior alpha: scalar or comma list per edge");
  sub->add_option("--prior-beta", c.prior_beta, "Beta prior beta: scalar or comma list per edge");
  sub->add_option("--output", c.output, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--out-dir", c.out_dir, "Also write artifacts here (default: $DBP_OUTPUT_DIR)");
  if (needs_input) {
    sub->add_option("--input", c.input, "Sequence file ('0', '1', '-' for missing, '#' comments)");
    sub->add_option("--series", c.series, "Labeled CSV with header year,winner");
    sub->add_option("--label-config", c.label_config, "JSON label map and exclusions for --series");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"de Bruijn process modelling of correlated binary sequences"};
  app.require_subcommand(1);
  Common c;
  std::string command;
  std::function<Artifact()> action;
  std::optional<std::uint64_t> report_seed;
  std::string digest;

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a sequence from a transition table");
  add_common(sim, c, false);
  std::string sim_table, init = "stationary";
  std::size_t sim_n = 100;
  std::optional<std::uint32_t> init_word;
  std::string save_path;
  sim->add_option("--table", sim_table, "Append-1 probabilities p_0..p_{2^m-1}")->required();
  sim->add_option("--n", sim_n, "Sequence length")->check(CLI::PositiveNumber);
  sim->add_option("--init", init, "Initial word")->check(CLI::IsMember({"stationary", "fixed", "uniform"}));
  sim->add_option("--word", init_word, "Initial word index for --init fixed");
  sim->add_option("--save", save_path, "Write the sequence file here");
  sim->callback([&] {
    command = "simulate";
    report_seed = c.seed;
    action = [&]() -> Artifact {
      const auto table = parse_table(sim_table, c, sim->count("--m") > 0);
      dbp::SimulationConfig cfg;
      cfg.n = sim_n;
      cfg.seed = c.seed;
      cfg.init = init == "stationary" ? dbp::InitMode::stationary
                                      : (init == "fixed" ? dbp::InitMode::fixed_word : dbp::InitMode::uniform_word);
      if (init == "fixed") {
        if (!init_word) throw dbp::InvalidArgument("--init fixed requires --word");
        cfg.fixed_word = dbp::make_word(*init_word, table.word_length());
      }
      const auto seq = dbp::simulate(table, cfg);
      const auto text = dbp::io::serialize_sequence_text(seq);
      digest = dbp::io::sha256_hex(sim_table);
      if (!save_path.empty()) write_file(save_path, text);
      std::ostringstream csv;
      csv << "position,letter\n";
      const auto letters = seq.letters();
      for (std::size_t i = 0; i < letters.size(); ++i) csv << i + 1 << ',' << int(letters[i]) << '\n';
      return {{{"m", table.m()}, {"n", seq.size()}, {"init", init}, {"sequence", letters_string(seq)}},
              csv.str(),
              {}};
    };
  });

  // prob
  auto* prob = app.add_subcommand("prob", "Joint probability of a fully observed sequence");
  add_common(prob, c, true);
  std::string prob_table, prob_seq;
  prob->add_option("--table", prob_table, "Append-1 probabilities")->required();
  prob->add_option("--sequence", prob_seq, "Letters, e.g. 0110 (alternative to --input)");
  prob->callback([&] {
    command = "prob";
    action = [&]() -> Artifact {
      const auto table = parse_table(prob_table, c, prob->count("--m") > 0);
      dbp::BinarySequence seq;
      if (!prob_seq.empty()) {
        seq = dbp::io::parse_sequence_text(prob_seq);
        digest = dbp::io::sha256_hex(prob_seq);
      } else {
        auto in = load_input(c);
        seq = std::move(in.sequence);
        digest = in.digest;
      }
      const auto letters = seq.letters();
      const auto stationary = dbp::stationary_distribution(table);
      json r = {{"m", table.m()},
                {"n", letters.size()},
                {"probability", dbp::sequence_probability(table, stationary, letters)},
                {"log_probability", dbp::log_sequence_probability(table, stationary, letters)}};
      return {r, "", {}};
    };
  });

  // counts / fit-mle / fit-bayes / mcmc / evidence share data loading
  auto* counts_cmd = app.add_subcommand("counts", "Sliding-window transition counts");
  add_common(counts_cmd, c, true);
  counts_cmd->callback([&] {
    command = "counts";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const auto counts = dbp::count_transitions(in.sequence, dbp::WordLength(c.m));
      return {counts_json(counts), counts_csv(counts), {}};
    };
  });

  auto* mle_cmd = app.add_subcommand("fit-mle", "Maximum-likelihood transition probabilities");
  add_common(mle_cmd, c, true);
  mle_cmd->callback([&] {
    command = "fit-mle";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const auto counts = dbp::count_transitions(in.sequence, dbp::WordLength(c.m));
      const auto est = dbp::mle(counts);
      json edges = json::array();
      std::ostringstream csv;
      csv << "word,visits,estimate,std_error\n";
      for (std::uint32_t i = 0; i < est.size(); ++i) {
        const auto& e = est[i];
        edges.push_back({{"word", i},
                         {"visits", e.visits},
                         {"estimate", e.estimate ? json(*e.estimate) : json(nullptr)},
                         {"std_error", e.std_error ? json(*e.std_error) : json(nullptr)}});
        csv << i << ',' << e.visits << ',' << (e.estimate ? num(*e.estimate) : "") << ','
            << (e.std_error ? num(*e.std_error) : "") << '\n';
      }
      return {{{"m", c.m}, {"counts", counts_json(counts)}, {"edges", edges}}, csv.str(), {}};
    };
  });

  auto* bayes_cmd = app.add_subcommand("fit-bayes", "Conjugate Beta posterior per edge");
  add_common(bayes_cmd, c, true);
  double level = 0.95;
  bayes_cmd->add_option("--level", level, "Credible level")->check(CLI::Range(0.0, 1.0));
  bayes_cmd->callback([&] {
    command = "fit-bayes";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const dbp::WordLength m(c.m);
      const auto post = dbp::posterior(dbp::count_transitions(in.sequence, m), prior_rule(c)(m));
      std::ostringstream csv;
      csv << "word,mean,mode,ci_low,ci_high\n";
      for (std::uint32_t i = 0; i < m.word_count(); ++i) {
        const auto [lo, hi] = post.credible_interval(i, level);
        const auto mode = post.mode(i);
        csv << i << ',' << num(post.mean(i)) << ',' << (mode ? num(*mode) : "") << ',' << num(lo) << ',' << num(hi)
            << '\n';
      }
      return {dbp::experiments::to_json(post, level), csv.str(), {}};
    };
  });

  auto* mcmc_cmd = app.add_subcommand("mcmc", "Metropolis-Hastings posterior sampling");
  add_common(mcmc_cmd, c, true);
  dbp::MhConfig mh;
  mcmc_cmd->add_option("--iterations", mh.iterations, "Chain length including burn-in");
  mcmc_cmd->add_option("--burn-in", mh.burn_in, "Discarded iterations");
  mcmc_cmd->add_option("--proposal-scale", mh.proposal_scale, "Random-walk standard deviation");
  mcmc_cmd->add_option("--level", mh.credible_level, "Credible level")->check(CLI::Range(0.0, 1.0));
  mcmc_cmd->callback([&] {
    command = "mcmc";
    report_seed = c.seed;
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const dbp::WordLength m(c.m);
      mh.seed = c.seed;
      const auto res = dbp::mh_sample_posterior(dbp::count_transitions(in.sequence, m), prior_rule(c)(m), mh);
      json edges = json::array();
      std::ostringstream csv;
      csv << "word,mean,ci_low,ci_high,acceptance_rate\n";
      for (std::uint32_t i = 0; i < res.edges.size(); ++i) {
        const auto& e = res.edges[i];
        edges.push_back({{"word", i},
                         {"mean", e.mean},
                         {"ci_low", e.ci_low},
                         {"ci_high", e.ci_high},
                         {"acceptance_rate", e.acceptance_rate},
                         {"no_data", e.no_data}});
        csv << i << ',' << num(e.mean) << ',' << num(e.ci_low) << ',' << num(e.ci_high) << ','
            << num(e.acceptance_rate) << '\n';
      }
      return {{{"m", c.m},
               {"iterations", mh.iterations},
               {"burn_in", mh.burn_in},
               {"proposal_scale", mh.proposal_scale},
               {"edges", edges}},
              csv.str(),
              {}};
    };
  });

  auto* ev_cmd = app.add_subcommand("evidence", "Log model evidence for one word length");
  add_common(ev_cmd, c, true);
  ev_cmd->add_option("--evidence-basis", c.basis, "full-data or conditional");
  ev_cmd->callback([&] {
    command = "evidence";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const dbp::WordLength m(c.m);
      const double le = dbp::log_model_evidence(in.sequence, m, prior_rule(c)(m), parse_basis(c.basis));
      return {{{"m", c.m}, {"basis", c.basis}, {"log_evidence", le}}, "", {}};
    };
  });

  auto* sel_cmd = app.add_subcommand("select-m", "Bayes-factor selection of the word length");
  add_common(sel_cmd, c, true);
  int m_max = dbp::kDefaultMaxWordLength;
  sel_cmd->add_option("--m-max", m_max, "Largest candidate word length")
      ->check(CLI::Range(1, dbp::kDefaultMaxWordLength));
  sel_cmd->add_option("--evidence-basis", c.basis, "full-data or conditional");
  sel_cmd->callback([&] {
    command = "select-m";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const auto rep = dbp::select_word_length(in.sequence, m_max, prior_rule(c), parse_basis(c.basis));
      std::ostringstream csv;
      csv << "m,log_evidence\n";
      for (std::size_t i = 0; i < rep.candidates.size(); ++i)
        csv << rep.candidates[i] << ',' << num(rep.log_evidence[i]) << '\n';
      return {dbp::experiments::to_json(rep), csv.str(), {}};
    };
  });

  auto* pred_cmd = app.add_subcommand("predict", "Probability that the next letter is 1");
  add_common(pred_cmd, c, true);
  std::string pred_table, pred_mode = "conditional";
  pred_cmd->add_option("--table", pred_table, "Append-1 probabilities (default: posterior mean fitted to the input)");
  pred_cmd->add_option("--mode", pred_mode, "conditional or paper-marginal")
      ->check(CLI::IsMember({"conditional", "paper-marginal"}));
  pred_cmd->callback([&] {
    command = "predict";
    action = [&]() -> Artifact {
      auto in = load_input(c);
      digest = in.digest;
      const auto table = pred_table.empty()
                             ? dbp::posterior(dbp::count_transitions(in.sequence, dbp::WordLength(c.m)),
                                              prior_rule(c)(dbp::WordLength(c.m)))
                                   .mean_table()
                             : parse_table(pred_table, c, pred_cmd->count("--m") > 0);
      const auto mode =
          pred_mode == "conditional" ? dbp::PredictionMode::conditional : dbp::PredictionMode::paper_marginal;
      const double p1 = dbp::predict_next(table, in.sequence, mode);
      std::vector<double> p(table.append_one().begin(), table.append_one().end());
      return {{{"m", table.m()}, {"mode", pred_mode}, {"table", p}, {"p_next_one", p1}}, "", {}};
    };
  });

  auto* verify_cmd = app.add_subcommand("verify", "Compare closed forms against brute-force oracles");
  add_common(verify_cmd, c, false);
  int verify_n = 10;
  std::size_t trials = 10;
  verify_cmd->add_option("--n", verify_n, "Sequence length (enumeration budget: 12)");
  verify_cmd->add_option("--trials", trials, "Number of random tables")->check(CLI::PositiveNumber);
  verify_cmd->callback([&] {
    command = "verify";
    report_seed = c.seed;
    action = [&]() -> Artifact {
#ifdef DBP_WITH_ORACLE
      digest = dbp::io::sha256_hex("verify:" + std::to_string(c.m) + ":" + std::to_string(verify_n));
      json runs = json::array();
      bool all = true;
      std::ostringstream csv;
      csv << "trial,check,error,tolerance,passed\n";
      for (std::size_t t = 0; t < trials; ++t) {
        const auto table = dbp::oracle::random_table(dbp::WordLength(c.m), c.seed, t);
        const auto rep = dbp::oracle::run_verification(table, verify_n, c.seed + t);
        all = all && rep.passed();
        json checks = json::array();
        for (const auto& ch : rep.checks) {
          checks.push_back(
              {{"name", ch.name}, {"error", ch.error}, {"tolerance", ch.tolerance}, {"passed", ch.passed}});
          csv << t << ',' << ch.name << ',' << num(ch.error) << ',' << num(ch.tolerance) << ','
              << (ch.passed ? "true" : "false") << '\n';
        }
        runs.push_back({{"table", rep.table}, {"passed", rep.passed()}, {"checks", checks}});
      }
      return {{{"m", c.m}, {"n", verify_n}, {"trials", trials}, {"passed", all}, {"runs", runs}}, csv.str(), {}};
#else
      throw dbp::InvalidArgument("this build has no oracle support (configure with -DDBP_WITH_ORACLE=ON)");
#endif
    };
  });

  auto* exp_cmd = app.add_subcommand("experiment", "Replay a named study");
  add_common(exp_cmd, c, false);
  std::string study;
  dbp::experiments::Options opts;
  std::size_t replicates = 0;
  std::string data_dir;
  exp_cmd->add_option("name", study, "Study name")->required()->check(CLI::IsMember(dbp::experiments::study_names()));
  exp_cmd->add_option("--replicates", replicates, "Override the study's replicate count");
  exp_cmd->add_option("--data-dir", data_dir, "Directory holding boat_race.csv and boat_race.json");
  exp_cmd->add_option("--m-max", opts.m_max, "Largest candidate word length")
      ->check(CLI::Range(1, dbp::kDefaultMaxWordLength));
  exp_cmd->add_option("--evidence-basis", c.basis, "full-data or conditional");
  exp_cmd->add_option("--iterations", opts.mh.iterations, "MH chain length");
  exp_cmd->add_option("--burn-in", opts.mh.burn_in, "MH burn-in");
  exp_cmd->add_option("--proposal-scale", opts.mh.proposal_scale, "MH proposal standard deviation");
  exp_cmd->callback([&] {
    command = "experiment-" + study;
    report_seed = c.seed;
    action = [&]() -> Artifact {
      opts.seed = c.seed;
      opts.basis = parse_basis(c.basis);
      if (replicates > 0) opts.replicates = replicates;
      if (!data_dir.empty()) {
        opts.data_dir = data_dir;
      } else if (const char* env = std::getenv("DBP_DATA_DIR"); env && *env) {
        opts.data_dir = env;
      } else {
        opts.data_dir = DBP_DEFAULT_DATA_DIR;
      }
      auto out = dbp::experiments::run_study(study, opts);
      digest = out.inputs_digest;
      std::string csv = out.csv_files.empty() ? "" : out.csv_files.front().second;
      return {out.results, csv, out.csv_files};
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return static_cast<int>(Exit::usage);
  }

  try {
    Artifact a = action();
    a.report = dbp::io::make_report(command, digest, report_seed, std::move(a.report));
    emit(command, c, a);
    if (command == "verify" && !a.report["results"]["passed"].get<bool>()) {
      print_error("verification", "one or more oracle comparisons failed");
      return static_cast<int>(Exit::verification);
    }
    return static_cast<int>(Exit::ok);
  } catch (const dbp::DataError& e) {
    json extra = json::object();
    if (e.line() != 0) extra["line"] = e.line();
    if (e.column() != 0) extra["column"] = e.column();
    print_error("data", e.what(), extra);
    return static_cast<int>(Exit::data);
  } catch (const dbp::NonUniqueStationary& e) {
    print_error("not_unique", e.what(), {{"closed_classes", e.closed_classes()}});
    return static_cast<int>(Exit::data);
  } catch (const dbp::Error& e) {
    switch (e.kind()) {
      case dbp::ErrorKind::invalid_argument:
        print_error("invalid_argument", e.what());
        return static_cast<int>(Exit::usage);
      case dbp::ErrorKind::verification:
        print_error("verification", e.what());
        return static_cast<int>(Exit::verification);
      default:
        print_error(e.kind() == dbp::ErrorKind::budget ? "budget" : "data", e.what());
        return static_cast<int>(Exit::data);
    }
  } catch (const std::exception& e) {
    print_error("data", e.what());
    return static_cast<int>(Exit::data);
  }
}
