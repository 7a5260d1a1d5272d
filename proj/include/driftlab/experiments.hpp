#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftlab/oracle.hpp"
#include "driftlab/stats.hpp"
#include "driftlab/streams.hpp"

namespace driftlab {

struct ExperimentConfig {
  std::vector<std::string> datasets = {"sea", "sine", "stagger"};
  std::vector<std::string> models = {"dt",  "rf",  "knn",        "bagging",
                                     "adaboost", "gnb", "perceptron", "linear-svm"};
  int reps = 100;
  std::size_t train_size = 500;
  std::size_t test_size = 500;
  std::size_t table_rows = 4000;
  int segment_depth = 3;
  std::uint64_t seed = 12345;
  std::string out_dir;
  bool full_scale = false;  // lifts reps to the full 1000
  int threads = 0;
  std::size_t random_n = 1000;  // verify-theory suite size

  int effective_reps() const { return full_scale ? 1000 : reps; }
};

struct ResultRow {
  std::string dataset, model, condition;
  int rep = 0;
  double accuracy = 0.0;
};

struct Aggregate {
  double mean = 0.0;
  double stddev = 0.0;
  std::size_t n = 0;
};

struct PairTest {
  std::string dataset, model, condition_a, condition_b;
  double mean_a = 0.0, mean_b = 0.0;
  WelchResult welch;
  bool significant = false;  // p < 0.001
};

struct ResultTable {
  std::string experiment;
  std::vector<ResultRow> rows;
  std::vector<PairTest> tests;

  std::map<std::string, Aggregate> aggregates() const;  // key dataset|model|condition
  Aggregate aggregate(const std::string& dataset, const std::string& model,
                      const std::string& condition) const;
  std::vector<double> accuracies(const std::string& dataset, const std::string& model,
                                 const std::string& condition) const;
};

/// Train on D_00, test on all four cells (conditions none / real / virtual /
/// both); Welch tests none-real, none-virtual, virtual-both per pair.
ResultTable cmd_drift_types(const ExperimentConfig& config);

/// Composed training windows, all tested on D_00: none (D_00), composed-real
/// (D_00 u D_01), composed-virtual (D_00 u D_10), plus the wrong single
/// windows single-real (D_01) and single-virtual (D_10) as baselines.
ResultTable cmd_composed(const ExperimentConfig& config);

struct UsageRow {
  std::string dataset, model;
  double none = 0.0, virt = 0.0, composed = 0.0;
  std::optional<double> metric;  // |(c-v)/(n-c)|, undefined when |n-c| < 1e-6
};

/// The additional-information metric computed from the two tables above.
std::vector<UsageRow> cmd_usage_metric(const ResultTable& drift_types,
                                       const ResultTable& composed);

// --- theory verification -----------------------------------------------------

struct TheorySuiteStats {
  std::size_t instances = 0;
  std::size_t fixture_mismatches = 0;
  std::size_t strong_weak_failures = 0;   // strong => weak (both directions)
  std::size_t weak_uniq_failures = 0;     // weak + uniqueness => strong
  std::size_t lemma33_failures = 0;       // monotone-loss lemma, both directions
  std::size_t bound_failures = 0;         // risk decomposition bound
  std::size_t other_arrow_failures = 0;
  // Monte-Carlo arrows (consistent ERM):
  std::size_t mc_run = 0;
  std::size_t strong_instances = 0, strong_mc_fired = 0;
  std::size_t a_fired = 0, a_fired_weak = 0;
  std::size_t const_applicable = 0, const_star_agree = 0, const_plain_agree = 0;

  std::size_t total_failures() const {
    return fixture_mismatches + strong_weak_failures + weak_uniq_failures + lemma33_failures +
           bound_failures + other_arrow_failures;
  }
};

/// Fixture suite: reproduces every appendix counterexample and the two
/// inconsistent-learner constructions. Emits CSV rows
/// instance_id,arrow,expected,observed,pass into `csv` when given.
TheorySuiteStats run_fixture_suite(const McParams& mc, std::ostream* csv);

/// Random-instance suite over `n` seeded instances. MC arrows run on the
/// instances where they are informative (strong drift or constant optimal
/// loss) using lowest-index ERM at the oracle-predicted margin.
TheorySuiteStats run_random_suite(std::size_t n, std::uint64_t seed, const McParams& mc,
                                  bool with_mc, int threads, std::ostream* csv);

/// Universality check: has_real_drift versus the closed-form universal-MSE
/// strong-drift oracle over `n` random processes; returns disagreements.
std::size_t run_universal_mse_suite(std::size_t n, std::uint64_t seed, int threads);

// --- emission -----------------------------------------------------------------

void emit_rows_csv(const ResultTable& table, std::ostream& out);
void emit_tests_csv(const std::vector<PairTest>& tests, std::ostream& out);
void emit_usage_csv(const std::vector<UsageRow>& rows, std::ostream& out);

/// Fig-3/4 style scatter: one point per (dataset, model) at the mean
/// accuracies of the two conditions, half-stddev error bars, marker by
/// dataset, color by model. Deterministic byte output for a fixed table.
std::string svg_scatter(const ResultTable& table, const std::string& cond_x,
                        const std::string& cond_y);

/// Writes <experiment>.csv, <experiment>*.svg and tests.csv under dir.
void write_experiment_outputs(const ResultTable& table, const std::string& dir,
                              const std::vector<std::pair<std::string, std::string>>& svg_pairs);

}  // namespace driftlab
