#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/core.hpp"
#include "driftlab/oracle.hpp"

namespace driftlab {

/// Model kind plus hyperparameters, parsable from CLI strings like
/// "knn:k=5" or "rf:trees=10,depth=10". Stochastic kinds take `seed`.
struct LearnerSpec {
  std::string kind;
  std::map<std::string, double> params;
  std::uint64_t seed = 0;

  double get(const std::string& name, double fallback) const {
    auto it = params.find(name);
    return it == params.end() ? fallback : it->second;
  }
};

LearnerSpec parse_learner_spec(std::string_view text);
std::vector<std::string> builtin_learner_kinds();

/// Train/update/predict contract shared by all models. `update` is only
/// supported by the incremental kinds (knn, gnb, perceptron, linear-svm);
/// everything else reports incremental() == false and the stream engine
/// falls back to periodic refits on a sliding buffer.
class Learner {
 public:
  virtual ~Learner() = default;

  const LearnerSpec& spec() const { return spec_; }
  bool fitted() const { return fitted_; }
  virtual bool incremental() const { return false; }

  void fit(const Sample& s);
  void update(const LabeledPoint& p);
  double predict_value(const Instance& x) const;  // class-1 score in [0,1]
  Label predict(const Instance& x) const { return predict_value(x) >= 0.5 ? 1 : 0; }

  /// Back to the unfitted initial state.
  virtual void reset() { fitted_ = false; }

  double accuracy(const Sample& s) const;

 protected:
  explicit Learner(LearnerSpec spec) : spec_(std::move(spec)) {}
  virtual void do_fit(const Sample& s) = 0;
  virtual void do_update(const LabeledPoint& p);
  virtual double do_predict(const Instance& x) const = 0;

  LearnerSpec spec_;
  bool fitted_ = false;
};

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec);

/// Exact empirical risk minimization over a finite class; returns the
/// lowest-index hypothesis attaining minimal empirical loss (highest-index
/// when tie_high is set, giving a second consistent learner for the
/// algorithm-agnostic checks).
std::unique_ptr<Learner> make_erm_learner(FiniteHypothesisClass cls, Loss loss,
                                          bool tie_high = false);

/// One-hot feature encoding for the linear-family models: numeric features
/// pass through, each categorical feature expands over the categories seen
/// at fit time (unseen categories encode to all zeros).
struct Encoder {
  std::size_t n_numeric = 0;
  std::vector<std::vector<int>> categories;
  std::size_t width() const;
  std::vector<double> encode(const Instance& x) const;
  static Encoder build(const Sample& s);
};

}  // namespace driftlab
