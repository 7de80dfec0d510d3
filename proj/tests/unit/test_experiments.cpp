#include <gtest/gtest.h>

#include <cmath>

#include "dbp/error.hpp"
#include "dbp/experiments.hpp"

using namespace dbp;
using namespace dbp::experiments;

namespace {

MhConfig quick_mh() {
  MhConfig mh;
  mh.iterations = 4000;
  mh.burn_in = 500;
  return mh;
}

}  // namespace

TEST(Experiments, EstimationStudyIsDeterministicAndSane) {
  const auto a = run_estimation_study(anti_clustered_table(), 200, 8, 5, quick_mh());
  const auto b = run_estimation_study(anti_clustered_table(), 200, 8, 5, quick_mh());
  EXPECT_EQ(to_json(a).dump(), to_json(b).dump());
  EXPECT_LT(a.mean_abs_error, 0.1);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_LE(a.estimate_spread[i].first, a.average_estimate[i]);
    EXPECT_GE(a.estimate_spread[i].second, a.average_estimate[i]);
    EXPECT_LE(a.coverage[i], 8u);
  }
}

TEST(Experiments, SelectionStudyHistogramAddsUp) {
  const auto s = run_selection_study(clustered_table(), 200, 20, 9, 10, EvidenceBasis::full_data);
  std::size_t total = 0;
  for (auto h : s.histogram) total += h;
  EXPECT_EQ(total, 20u);
  double f = 0.0;
  for (int m = 1; m <= 10; ++m) f += s.fraction(m);
  EXPECT_NEAR(f, 1.0, 1e-12);
}

TEST(Experiments, BoatRaceStudyFromModuleOutputs) {
  Options o;
  o.data_dir = DBP_DATA_DIR;
  const auto out = run_study("boatrace", o);
  const auto& r = out.results;
  EXPECT_EQ(r["aggregates"]["usable"], 164);
  EXPECT_EQ(r["evidence"]["selected"], 2);
  const auto& m2 = r["fits"][0];
  EXPECT_EQ(m2["m"], 2);
  const double modes[] = {0.283, 0.462, 0.519, 0.723};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(m2["posterior"]["edges"][i]["mode"].get<double>(), modes[i], 5e-4);
  EXPECT_NEAR(m2["letter_marginal_0"].get<double>(), 0.5, 0.05);
  EXPECT_EQ(out.csv_files.size(), 1u);
}

TEST(Experiments, UnknownStudy) { EXPECT_THROW(run_study("nope", Options{}), InvalidArgument); }
