#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "driftlab/rng.hpp"

namespace driftlab {

// Default tolerances used across the oracle and its fixtures. Fixture
// weights are dyadic-or-small rationals, so equality checks at kTol are
// effectively exact.
inline constexpr double kTol = 1e-9;
inline constexpr double kWeightTol = 1e-12;

/// One observation of the data space: real-valued features plus
/// category indices. Either part may be empty; all instances in one
/// distribution or dataset share the same schema.
struct Instance {
  std::vector<double> numeric;
  std::vector<int> categorical;

  bool operator==(const Instance&) const = default;
};

/// Lexicographic order over (numeric, categorical); used to canonicalize
/// atom lists and to key tabular hypotheses.
bool instance_less(const Instance& a, const Instance& b);

Instance num1(double x);
Instance num2(double x0, double x1);

using Label = int;  // binary: 0 or 1

struct LabeledPoint {
  Instance x;
  Label y;
};

enum class Loss { ZeroOne, Mse };

Loss parse_loss(std::string_view name);
std::string loss_name(Loss loss);

/// Loss of a real-valued prediction against a binary label. ZeroOne
/// thresholds the prediction at 1/2 (crisp hypotheses emit exactly 0 or 1).
inline double point_loss(double prediction, Label y, Loss loss) {
  if (loss == Loss::ZeroOne) return ((prediction >= 0.5) ? 1 : 0) != y ? 1.0 : 0.0;
  const double d = prediction - static_cast<double>(y);
  return d * d;
}

struct Atom {
  double weight = 0.0;
  Instance x;
  Label y = 0;
};

/// Weighted point masses over (instance, label); the computable stand-in
/// for distributions built from weighted Dirac deltas.
class FiniteDistribution {
 public:
  explicit FiniteDistribution(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  std::size_t numeric_features() const { return n_numeric_; }
  std::size_t categorical_features() const { return n_categorical_; }

  /// Canonical form: identical (instance, label) atoms merged, atoms sorted.
  /// Merging never changes any expected loss.
  FiniteDistribution merged() const;

  /// All distinct instances in the support (after merging).
  std::vector<Instance> support() const;

  /// P(Y=1 | X=x) and the marginal mass of x, from the merged atoms.
  struct Posterior {
    double mass = 0.0;
    double p1 = 0.0;
  };
  Posterior posterior_at(const Instance& x) const;

 private:
  std::vector<Atom> atoms_;
  std::size_t n_numeric_ = 0;
  std::size_t n_categorical_ = 0;
};

FiniteDistribution dirac(const Instance& x, Label y);

/// Uniform mixture of (instance, label) pairs, e.g. (d(-1,0)+d(0,0)+d(1,1))/3.
FiniteDistribution uniform_mix(const std::vector<std::pair<double, Label>>& points);

/// Mixture a*lhs + (1-a)*rhs.
FiniteDistribution mix(const FiniteDistribution& lhs, const FiniteDistribution& rhs, double a);

/// Exact total variation distance computed on merged atoms.
double total_variation(const FiniteDistribution& a, const FiniteDistribution& b);

struct TimePoint {
  double p = 0.0;  // P_T mass, strictly positive
  FiniteDistribution dist;
};

/// Finitely many time points with probabilities P_T and per-time
/// distributions. The finite form backs the oracles; streams use
/// generative sources instead.
class DriftProcess {
 public:
  explicit DriftProcess(std::vector<TimePoint> points);

  const std::vector<TimePoint>& timepoints() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// All distinct instances appearing at any time point.
  std::vector<Instance> domain() const;

 private:
  std::vector<TimePoint> points_;
};

/// Uniform P_T over the given distributions.
DriftProcess uniform_process(std::vector<FiniteDistribution> dists);

/// Nonempty set of timepoint indices; P_T mass is automatically positive.
struct TimeWindow {
  std::vector<std::size_t> indices;

  static TimeWindow single(std::size_t i) { return TimeWindow{{i}}; }
};

struct Sample {
  std::vector<LabeledPoint> points;
  std::string provenance;
  std::uint64_t seed = 0;

  std::size_t size() const { return points.size(); }
};

// --- operations -----------------------------------------------------------

/// Mean distribution over the window: the P_T-weighted mixture of member
/// distributions renormalized by P(T in W).
FiniteDistribution mean_distribution(const DriftProcess& process, const TimeWindow& w);

using PredictFn = std::function<double(const Instance&)>;

double expected_loss(const PredictFn& predict, const FiniteDistribution& d, Loss loss);
double empirical_loss(const PredictFn& predict, const Sample& s, Loss loss);

/// i.i.d. draws by inverse CDF over atom weights; identical (d, n, seed)
/// give identical samples.
Sample draw_sample(const FiniteDistribution& d, std::size_t n, std::uint64_t seed);

/// Multinomial per-atom counts of draw_sample(d, n, seed) without
/// materializing the points (same RNG consumption).
std::vector<std::int64_t> draw_counts(const FiniteDistribution& d, std::size_t n, Rng& rng);

/// True iff some pair of timepoints differs in total variation by more
/// than tol (computed exactly on merged atoms).
bool has_distribution_drift(const DriftProcess& process, double tol = kTol);

// --- plain-text process format --------------------------------------------
//
// One line per atom:  t=<idx> p_t=<real> w=<real> x=<comma-separated> y=<0|1>
// An optional leading line `schema=<numeric>,<categorical>` carries mixed
// schemas; without it every x value is numeric. '#' starts a comment.

std::string format_process(const DriftProcess& process);
DriftProcess parse_process(std::string_view text);

}  // namespace driftlab
