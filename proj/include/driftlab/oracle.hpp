#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "driftlab/core.hpp"

namespace driftlab {

// --- finite hypothesis classes ---------------------------------------------

/// 1[x_f > theta] (or 1[x_f < theta] when greater == false).
struct ThresholdHyp {
  std::size_t feature = 0;
  double theta = 0.0;
  bool greater = true;
};

/// 1[x is a member of the given set].
struct SetIndicatorHyp {
  std::vector<Instance> members;
};

/// Probabilistic classifier on a finite support: instance -> value in [0,1];
/// instances outside the table map to `fallback`.
struct TabularHyp {
  std::vector<std::pair<Instance, double>> values;  // sorted by instance_less
  double fallback = 0.0;
};

/// 1[w.x + b > 0] over the numeric features.
struct LinearHyp {
  std::vector<double> weights;
  double bias = 0.0;
};

struct ConstantHyp {
  double value = 0.0;
};

using Hypothesis =
    std::variant<ThresholdHyp, SetIndicatorHyp, TabularHyp, LinearHyp, ConstantHyp>;

double predict(const Hypothesis& h, const Instance& x);
std::string describe(const Hypothesis& h);

struct FiniteHypothesisClass {
  std::vector<Hypothesis> hypotheses;

  FiniteHypothesisClass() = default;
  explicit FiniteHypothesisClass(std::vector<Hypothesis> hs) : hypotheses(std::move(hs)) {
    if (hypotheses.empty()) throw std::invalid_argument("empty hypothesis class");
  }
  std::size_t size() const { return hypotheses.size(); }
};

double expected_loss(const Hypothesis& h, const FiniteDistribution& d, Loss loss);
double empirical_loss(const Hypothesis& h, const Sample& s, Loss loss);

/// All thresholds 1[x_f > theta] that are distinguishable on the process
/// support: midpoints between adjacent coordinates plus outer sentinels.
/// Exact finite stand-in for the infinite threshold family: on point-mass
/// distributions no achievable loss value is missed.
FiniteHypothesisClass threshold_grid(const DriftProcess& process, std::size_t feature = 0);
FiniteHypothesisClass threshold_grid(std::span<const double> coords, std::size_t feature = 0);

/// All tabular maps support -> {0, 1/(g-1), ..., 1}. Size g^N, capped at 1e6.
FiniteHypothesisClass tabular_universal_class(std::span<const Instance> support,
                                              std::size_t grid);

// --- drift decision procedures ---------------------------------------------

/// Indices of hypotheses with loss <= min + tol on d. Never empty.
std::vector<std::size_t> argmin_set(const FiniteHypothesisClass& H, const FiniteDistribution& d,
                                    Loss loss, double tol = kTol);

struct StrongResult {
  bool drift = false;
  double constant = 0.0;  // C_s = (1/3) min_h [gap_1(h) + gap_2(h)]; > 0 iff drift
};

/// Strong H-model drift: no common near-optimal model, decided as
/// disjointness of the two argmin sets. The witness constant follows the
/// paper's construction and is positive exactly when drift is present.
StrongResult check_strong_H(const DriftProcess& process, const FiniteHypothesisClass& H,
                            Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                            double tol = kTol);

struct WeakResult {
  bool drift = false;
  std::optional<std::size_t> witness;  // a w_from-minimizer that is w_to-suboptimal
};

/// Weak H-model drift from w_from to w_to: some model optimal on w_from
/// stops being optimal on w_to.
WeakResult check_weak_H(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                        const TimeWindow& w_from, const TimeWindow& w_to, double tol = kTol);

struct EllResult {
  bool drift = false;
  std::optional<std::size_t> witness;
  double constant = 0.0;  // max loss increase over near-optimal models
};

/// ell-model drift: the loss of a w_from-optimal model increases on w_to.
EllResult check_ell(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                    const TimeWindow& w_from, const TimeWindow& w_to, double tol = kTol);

enum class LossRelation { Increasing, Decreasing, Constant };

std::string relation_name(LossRelation r);

LossRelation optimal_loss_relation(const DriftProcess& process, const FiniteHypothesisClass& H,
                                   Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                                   double tol = kTol);

/// max over H of |L_{w1}(h) - L_{w2}(h)|, the distributional-discrepancy
/// term of the risk decomposition, exact for finite classes.
double discrepancy(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                   const TimeWindow& w1, const TimeWindow& w2);

/// Whether near-optimal models on d are unique as loss functions: every
/// pair within tol of the minimum has pointwise loss differences <= tol at
/// both labels over `domain` (default: the support of d itself). Pass the
/// process-wide domain to get the premise of the strong<=>weak lemma.
bool loss_uniqueness_holds(const FiniteHypothesisClass& H, const FiniteDistribution& d, Loss loss,
                           double tol = kTol, std::span<const Instance> domain = {});

/// Real drift between the windows: the conditional label probabilities of
/// the two mean distributions differ at some instance carried by both.
bool has_real_drift(const DriftProcess& process, const TimeWindow& w1, const TimeWindow& w2,
                    double tol = kTol);

/// Strong H-model drift for the full universal class of probabilistic
/// classifiers under MSE, computed in closed form: per-instance squared
/// losses separate, the optimal table entry is the conditional mean, and
/// the witness constant reduces to
///   C_s = (1/3) sum_x [m1(x) m2(x) / (m1(x)+m2(x))] (mu1(x)-mu2(x))^2
/// over instances x carried by both windows. Positive iff real drift.
StrongResult check_strong_H_universal_mse(const DriftProcess& process, const TimeWindow& w1,
                                          const TimeWindow& w2, double tol = kTol);

// --- A-model drift (Monte Carlo over training samples) ----------------------

/// A learning algorithm for Monte-Carlo A-drift checks. It sees the window
/// distribution together with per-atom sample counts (an exact, compressed
/// encoding of the i.i.d. sample) and returns a model.
using CountsLearner =
    std::function<Hypothesis(const FiniteDistribution& window_dist,
                             const std::vector<std::int64_t>& atom_counts)>;

/// Empirical risk minimization over a finite class; ties broken toward the
/// lowest (or highest) hypothesis index. Consistent for finite classes.
CountsLearner erm_learner(const FiniteHypothesisClass& H, Loss loss, bool lowest_index = true);

/// Bernstein union bound on the probability that ERM on an n-sample from d
/// returns a hypothesis outside the exact argmin set. The A-model-drift
/// definition quantifies over sample sizes ("there exist N1, N2"); a small
/// bound certifies that the pinned Monte-Carlo n already reaches that
/// regime, so the sampled implication arrows are conclusive.
double erm_misselection_bound(const FiniteHypothesisClass& H, const FiniteDistribution& d,
                              Loss loss, std::size_t n, double tol = kTol);

struct McParams {
  std::size_t n1 = 2000;
  std::size_t n2 = 2000;
  std::size_t trials = 200;
  std::uint64_t seed = 1;
  double default_C = 0.05;  // used when no oracle constant is available
  double hi = 0.95;         // verdict thresholds
  double lo = 0.05;
  double certify_bound = 1e-3;  // misselection bound below which n1/n2 count as sufficient
};

struct McResult {
  double estimate = 0.0;  // frequency of the A-drift event over trials
  std::size_t fires = 0;
  std::size_t trials = 0;
  std::size_t errors = 0;  // learner failures, excluded from the estimate
};

/// Monte-Carlo frequency of the A-model-drift event
///   L_{W2}(A(S1)) > L_{W2}(A(S2)) + C
/// over independent sample pairs; losses evaluated exactly.
McResult check_A_drift_mc(const DriftProcess& process, const CountsLearner& learner, Loss loss,
                          const TimeWindow& w1, const TimeWindow& w2, std::size_t n1,
                          std::size_t n2, double C, std::size_t trials, std::uint64_t seed);

// --- aggregate report and the implication checklist -------------------------

struct DriftReport {
  StrongResult strong;
  WeakResult weak_12, weak_21;
  EllResult ell_12, ell_21;
  LossRelation relation = LossRelation::Constant;
  double discrepancy = 0.0;
  double min_loss_1 = 0.0, min_loss_2 = 0.0;
};

DriftReport compute_drift_report(const DriftProcess& process, const FiniteHypothesisClass& H,
                                 Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                                 double tol = kTol);

enum class ArrowStatus { Pass, Fail, NotApplicable };

struct ArrowCheck {
  std::string arrow;
  ArrowStatus status = ArrowStatus::NotApplicable;
  std::string detail;
};

struct Figure2Params {
  double tol = kTol;
  bool learner_consistent = true;
  CountsLearner learner;  // defaults to lowest-index ERM over H
  McParams mc;
  bool run_mc = true;
};

struct Figure2Result {
  DriftReport report;
  std::vector<ArrowCheck> arrows;
  bool uniqueness_1 = false, uniqueness_2 = false;
  double mc_A = -1.0;        // A-drift event frequency (-1 when not run)
  double mc_ell_star = -1.0; // frequency of L_{W2}(A(S1)) > L_{W1}(A(S1)) + C
  double mc_C = 0.0;
  bool mc_certified = false;  // n1/n2 certified sufficient for the sampled arrows
  bool violation() const;
};

/// Evaluates every implication between the drift notions that is
/// applicable under the declared side conditions (consistency of the
/// learner, loss uniqueness, monotonicity of the optimal loss) and reports
/// pass/fail/not-applicable per arrow.
Figure2Result verify_figure2(const DriftProcess& process, const FiniteHypothesisClass& H,
                             Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                             const Figure2Params& params);

// --- random instances for the property suites --------------------------------

struct RandomInstance {
  DriftProcess process;
  FiniteHypothesisClass cls;
  TimeWindow w1, w2;
};

/// Small seeded instance: 1-D support of <= 6 points, <= 4 timepoints with
/// atom weights k/24, <= 12 hypotheses mixing thresholds, constants and set
/// indicators, and two random windows.
RandomInstance make_random_instance(std::uint64_t seed);

}  // namespace driftlab
