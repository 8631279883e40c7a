#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

#include "coherence/experiments.hpp"
#include "coherence/parallel.hpp"
#include "coherence/validation.hpp"

namespace coherence {
namespace {

SweepConfig small(Experiment e, std::size_t samples, std::vector<double> grid) {
  SweepConfig cfg = default_config(e);
  cfg.samples = samples;
  cfg.grid = std::move(grid);
  return cfg;
}

std::string sweep_csv(const SweepConfig& cfg, const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  write_sweep_csv(os, cfg, records);
  return os.str();
}

void expect_record_invariants(const SweepRecord& r) {
  EXPECT_LE(r.count_positive, r.count_total);
  EXPECT_DOUBLE_EQ(r.fraction, double(r.count_positive) / double(r.count_total));
  EXPECT_NEAR(r.std_error, std::sqrt(r.fraction * (1 - r.fraction) / r.count_total), 1e-15);
}

TEST(DefaultConfig, Values) {
  const SweepConfig fig1 = default_config(Experiment::SubadditivitySweep);
  EXPECT_EQ(fig1.samples, 1000u);
  ASSERT_EQ(fig1.grid.size(), 51u);
  EXPECT_DOUBLE_EQ(fig1.grid[1], 0.02);
  EXPECT_EQ(fig1.n_qubits, 2);
  EXPECT_EQ(default_config(Experiment::OrderingVsDimension).samples, 10000u);
  EXPECT_EQ(default_config(Experiment::OrderingVsRank).grid.size(), 10u);
  EXPECT_EQ(default_config(Experiment::OrderingVsRank).dim, 10);
  for (Experiment e : {Experiment::SubadditivitySweep, Experiment::OrderingVsDimension,
                       Experiment::OrderingVsRank, Experiment::Theorem1Check,
                       Experiment::Result2Check})
    EXPECT_NO_THROW(default_config(e).validate());
}

TEST(SweepConfig, RejectsBadValues) {
  SweepConfig cfg = default_config(Experiment::SubadditivitySweep);
  cfg.samples = 0;
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg = default_config(Experiment::SubadditivitySweep);
  cfg.grid = {};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg.grid = {0.5, 1.2};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg = default_config(Experiment::SubadditivitySweep);
  cfg.pure_state = PureStateChoice::MaximallyEntangled;
  cfg.n_qubits = 3;
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg = default_config(Experiment::OrderingVsDimension);
  cfg.grid = {1};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg.grid = {2.5};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg = default_config(Experiment::OrderingVsRank);
  cfg.grid = {11};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg.grid = {0};
  EXPECT_THROW(cfg.validate(), ExperimentError);
  cfg = default_config(Experiment::Theorem1Check);
  cfg.threads = 0;
  EXPECT_THROW(cfg.validate(), ExperimentError);
}

TEST(Runners, RejectWrongExperimentKind) {
  const SweepConfig cfg = small(Experiment::OrderingVsDimension, 1, {2});
  EXPECT_THROW(run_subadditivity_sweep(cfg), ExperimentError);
  EXPECT_THROW(run_ordering_vs_rank(cfg), ExperimentError);
  EXPECT_THROW(run_theorem1_check(cfg), ExperimentError);
  EXPECT_THROW(run_result2_check(cfg), ExperimentError);
}

TEST(UniformGrid, Endpoints) {
  const auto g = uniform_grid(5);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_EQ(g.front(), 0.0);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_DOUBLE_EQ(g[2], 0.5);
}

TEST(MakeRecord, StandardError) {
  const SweepRecord r = make_record(0.3, MeasurePair::L1Roc, 100, 25);
  EXPECT_DOUBLE_EQ(r.fraction, 0.25);
  EXPECT_DOUBLE_EQ(r.std_error, std::sqrt(0.25 * 0.75 / 100));
  EXPECT_EQ(make_record(0.0, std::nullopt, 10, 0).std_error, 0.0);
}

TEST(SubadditivitySweep, Endpoints) {
  for (PureStateChoice phi : {PureStateChoice::MaximallyCoherent, PureStateChoice::MaximallyEntangled}) {
    SweepConfig cfg = small(Experiment::SubadditivitySweep, 200, {0.0, 1.0});
    cfg.pure_state = phi;
    const auto records = run_subadditivity_sweep(cfg);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].fraction, 1.0);
    EXPECT_EQ(records[1].fraction, 0.0);
    for (const auto& r : records) {
      expect_record_invariants(r);
      EXPECT_FALSE(r.pair.has_value());
    }
  }
}

TEST(SubadditivitySweep, MonotoneAndDiesNearQuarter) {
  // For the maximally coherent mixture the sub-additive fraction is
  // 1 - 3p/(1-p) on p <= 1/4 and 0 beyond.
  const SweepConfig cfg = small(Experiment::SubadditivitySweep, 400, uniform_grid(11));
  const auto records = run_subadditivity_sweep(cfg);
  for (std::size_t i = 1; i < records.size(); ++i)
    EXPECT_LE(records[i].fraction,
              records[i - 1].fraction + 2 * (records[i].std_error + records[i - 1].std_error));
  for (const auto& r : records) {
    const double p = r.sweep_point;
    const double expected = p <= 0.25 ? std::max(0.0, 1.0 - 3.0 * p / (1.0 - p)) : 0.0;
    EXPECT_NEAR(r.fraction, expected, 4.0 * std::sqrt(0.25 / r.count_total) + 1e-12) << "p=" << p;
  }
  const auto t = transition_point(records);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 0.2, 1e-12);
}

TEST(SubadditivitySweep, IsDeterministicAcrossThreadCounts) {
  SweepConfig cfg = small(Experiment::SubadditivitySweep, 100, {0.1, 0.2});
  cfg.seed = 7;
  const std::string one = sweep_csv(cfg, run_subadditivity_sweep(cfg));
  cfg.threads = 4;
  EXPECT_EQ(one, sweep_csv(cfg, run_subadditivity_sweep(cfg)));
  cfg.seed = 8;
  EXPECT_NE(one, sweep_csv(cfg, run_subadditivity_sweep(cfg)));
}

TEST(TransitionPoint, Estimator) {
  std::vector<SweepRecord> recs{make_record(0.0, std::nullopt, 10, 10),
                                make_record(0.1, std::nullopt, 10, 5),
                                make_record(0.2, std::nullopt, 10, 4),
                                make_record(0.3, std::nullopt, 10, 0)};
  EXPECT_EQ(transition_point(recs), 0.2);
  EXPECT_FALSE(transition_point({make_record(0.0, std::nullopt, 10, 10)}).has_value());
}

TEST(OrderingVsDimension, Structure) {
  SweepConfig cfg = small(Experiment::OrderingVsDimension, 100, {2, 3, 4});
  cfg.threads = 2;
  const auto records = run_ordering_vs_dimension(cfg);
  ASSERT_EQ(records.size(), 3u * 3u);
  for (std::size_t i = 0; i < records.size(); ++i) {
    expect_record_invariants(records[i]);
    ASSERT_TRUE(records[i].pair.has_value());
    EXPECT_EQ(*records[i].pair, kAllPairs[i % 3]);
    EXPECT_EQ(records[i].count_total, 100u);
  }
  // Qubits: ROC equals l1.
  EXPECT_EQ(records[1].fraction, 0.0);
  // Qubits: ROC and relative entropy order like l1 and relative entropy.
  EXPECT_EQ(records[0].count_positive, records[2].count_positive);
}

TEST(OrderingVsRank, PureStatesHaveNoL1RocViolations) {
  SweepConfig cfg = small(Experiment::OrderingVsRank, 200, {1, 2});
  cfg.dim = 5;
  const auto records = run_ordering_vs_rank(cfg);
  ASSERT_EQ(records.size(), 6u);
  EXPECT_EQ(records[1].fraction, 0.0);
  EXPECT_GT(records[0].fraction, 0.0);
  EXPECT_GT(records[2].fraction, 0.0);
}

TEST(OrderingVsRank, IsDeterministic) {
  SweepConfig cfg = small(Experiment::OrderingVsRank, 50, {3});
  cfg.dim = 4;
  const std::string a = sweep_csv(cfg, run_ordering_vs_rank(cfg));
  cfg.threads = 3;
  EXPECT_EQ(a, sweep_csv(cfg, run_ordering_vs_rank(cfg)));
}

TEST(Theorem1Check, RowsAndTrueValue) {
  const SweepConfig cfg = small(Experiment::Theorem1Check, 5, {1, 2, 3});
  const auto rows = run_theorem1_check(cfg);
  ASSERT_EQ(rows.size(), 15u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.solution.status, sdp::SolveStatus::Optimal);
    EXPECT_NEAR(r.closed_form, r.k * (1.0 - std::ldexp(1.0, -r.n)), 1e-15);
    EXPECT_NEAR(r.difference, std::abs(r.sdp_value - r.closed_form), 1e-15);
    EXPECT_NEAR(r.sdp_value, r.k, 1e-6);
    EXPECT_NEAR(r.lambda, r.k * (1 - r.n), 1e-6);
    EXPECT_LE(r.lambda, 1e-9);
  }
  std::ostringstream os;
  write_theorem1_csv(os, cfg, rows);
  EXPECT_EQ(os.str().substr(0, os.str().find('\n')),
            "experiment,n,k,sdp_value,closed_form,abs_difference,lambda,gap,status,seed");
}

TEST(Result2Check, AncillaInvariance) {
  SweepConfig cfg = small(Experiment::Result2Check, 10, {2, 3});
  cfg.threads = 2;
  const auto rows = run_result2_check(cfg);
  ASSERT_EQ(rows.size(), 4u * 3u);
  for (const auto& r : rows) {
    EXPECT_EQ(r.samples, 10u);
    EXPECT_LE(r.max_deviation, r.measure == MeasureKind::L1 ? 1e-12 : 1e-6)
        << to_string(r.measure) << " " << r.d_a << "x" << r.d_b;
  }
}

TEST(SweepCsv, Format) {
  SweepConfig cfg = small(Experiment::OrderingVsDimension, 4, {3});
  cfg.seed = 42;
  std::ostringstream os;
  write_sweep_csv(os, cfg, {make_record(3, MeasurePair::RelRoc, 4, 1)});
  EXPECT_EQ(os.str(),
            "experiment,sweep_point,measure_pair,count_total,count_positive,fraction,stderr,seed\n"
            "OrderingVsDimension,3,RelativeEntropy-ROC,4,1,0.25,0.216506350946,42\n");
}

TEST(ConfigJson, Fields) {
  const nlohmann::json j = config_to_json(default_config(Experiment::OrderingVsRank));
  EXPECT_EQ(j["experiment"], "OrderingVsRank");
  EXPECT_EQ(j["samples"], 10000);
  EXPECT_EQ(j["grid"].size(), 10u);
  EXPECT_FALSE(git_revision().empty());
}

TEST(ParallelFor, CoversEveryIndexAndRethrows) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(100, 3,
                            [](std::size_t i) {
                              if (i == 57) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(AxiomSuite, AllPropertiesHold) {
  ValidationConfig cfg;
  cfg.instances = 30;
  cfg.threads = 2;
  const auto results = run_axiom_suite(cfg);
  EXPECT_EQ(results.size(), 7u);
  for (const auto& r : results) {
    EXPECT_TRUE(r.passed()) << r.name << " worst=" << r.worst;
    EXPECT_EQ(r.instances, 30u);
    EXPECT_LE(r.worst, r.tolerance);
  }
}

TEST(AxiomSuite, IndividualChecksAreDeterministic) {
  ValidationConfig cfg;
  cfg.instances = 10;
  const PropertyResult a = check_convexity(cfg);
  cfg.threads = 3;
  const PropertyResult b = check_convexity(cfg);
  EXPECT_EQ(a.worst, b.worst);
  EXPECT_EQ(a.name, b.name);
}

}  // namespace
}  // namespace coherence
