#include "driftlab/learners.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <sstream>

#include "driftlab/rng.hpp"
#include "tree.hpp"

namespace driftlab {

namespace {

double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

void shuffled_indices(std::vector<std::uint32_t>& idx, std::size_t n, Rng& rng) {
  idx.resize(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = static_cast<std::uint32_t>(i);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto j = i + rng.below(n - i);
    std::swap(idx[i], idx[j]);
  }
}

}  // namespace

namespace {

const std::map<std::string, std::vector<std::string>>& allowed_params() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"erm-finite", {}},
      {"constant", {"c"}},
      {"dt", {"depth", "min_leaf"}},
      {"rf", {"trees", "depth", "min_leaf", "max_features", "bootstrap"}},
      {"bagging", {"trees", "depth", "min_leaf", "bootstrap"}},
      {"adaboost", {"trees", "depth"}},
      {"knn", {"k", "buffer"}},
      {"gnb", {}},
      {"perceptron", {"epochs", "lr"}},
      {"linear-svm", {"epochs", "lambda"}},
  };
  return table;
}

}  // namespace

LearnerSpec parse_learner_spec(std::string_view text) {
  LearnerSpec spec;
  const auto colon = text.find(':');
  spec.kind = std::string(text.substr(0, colon));
  const auto allowed = allowed_params().find(spec.kind);
  if (allowed == allowed_params().end())
    throw std::invalid_argument("unknown learner kind: " + spec.kind);
  if (colon != std::string_view::npos) {
    std::istringstream in{std::string(text.substr(colon + 1))};
    std::string tok;
    while (std::getline(in, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("bad learner parameter (want key=value): " + tok);
      const std::string key = tok.substr(0, eq);
      const double value = std::stod(tok.substr(eq + 1));
      if (key == "seed") {
        spec.seed = static_cast<std::uint64_t>(value);
        continue;
      }
      if (std::find(allowed->second.begin(), allowed->second.end(), key) ==
          allowed->second.end())
        throw std::invalid_argument("learner kind '" + spec.kind +
                                    "' does not take parameter '" + key + "'");
      static const std::map<std::string, double> minimum = {
          {"trees", 1}, {"depth", 1}, {"min_leaf", 1}, {"k", 1},
          {"buffer", 1}, {"epochs", 1}, {"max_features", 1}};
      const auto lo = minimum.find(key);
      if (lo != minimum.end() && value < lo->second)
        throw std::invalid_argument("learner parameter '" + key + "' must be >= " +
                                    std::to_string(static_cast<int>(lo->second)));
      spec.params[key] = value;
    }
  }
  return spec;
}

std::vector<std::string> builtin_learner_kinds() {
  return {"erm-finite", "constant", "dt",  "rf",         "knn",
          "bagging",    "adaboost", "gnb", "perceptron", "linear-svm"};
}

void Learner::fit(const Sample& s) {
  if (s.points.empty()) throw std::invalid_argument("cannot fit on an empty sample");
  do_fit(s);
  fitted_ = true;
}

void Learner::update(const LabeledPoint& p) {
  if (!fitted_) throw std::logic_error("update before fit");
  if (!incremental())
    throw std::logic_error("learner kind '" + spec_.kind + "' does not support update");
  do_update(p);
}

void Learner::do_update(const LabeledPoint&) {
  throw std::logic_error("update not implemented for kind '" + spec_.kind + "'");
}

double Learner::predict_value(const Instance& x) const {
  if (!fitted_) throw std::logic_error("predict before fit");
  return do_predict(x);
}

double Learner::accuracy(const Sample& s) const {
  if (s.points.empty()) throw std::invalid_argument("accuracy of an empty sample");
  std::size_t correct = 0;
  for (const LabeledPoint& p : s.points)
    if (predict(p.x) == p.y) ++correct;
  return static_cast<double>(correct) / static_cast<double>(s.points.size());
}

std::size_t Encoder::width() const {
  std::size_t w = n_numeric;
  for (const auto& c : categories) w += c.size();
  return w;
}

std::vector<double> Encoder::encode(const Instance& x) const {
  std::vector<double> out;
  out.reserve(width());
  out.insert(out.end(), x.numeric.begin(), x.numeric.end());
  for (std::size_t f = 0; f < categories.size(); ++f) {
    for (int cat : categories[f]) out.push_back(x.categorical[f] == cat ? 1.0 : 0.0);
  }
  return out;
}

Encoder Encoder::build(const Sample& s) {
  Encoder e;
  e.n_numeric = s.points.front().x.numeric.size();
  e.categories.resize(s.points.front().x.categorical.size());
  for (const LabeledPoint& p : s.points)
    for (std::size_t f = 0; f < e.categories.size(); ++f) e.categories[f].push_back(p.x.categorical[f]);
  for (auto& cats : e.categories) {
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
  }
  return e;
}

namespace {

// --- constant ---------------------------------------------------------------

class ConstantLearner final : public Learner {
 public:
  explicit ConstantLearner(LearnerSpec spec) : Learner(std::move(spec)) {
    value_ = spec_.get("c", 0.0);
  }

 private:
  void do_fit(const Sample&) override {}  // h0 regardless of data
  double do_predict(const Instance&) const override { return value_; }
  double value_;
};

// --- exact finite-class ERM ---------------------------------------------------

class ErmLearner final : public Learner {
 public:
  ErmLearner(FiniteHypothesisClass cls, Loss loss, bool tie_high)
      : Learner(LearnerSpec{"erm-finite", {}, 0}),
        cls_(std::move(cls)),
        loss_(loss),
        tie_high_(tie_high) {}

 private:
  void do_fit(const Sample& s) override {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < cls_.size(); ++i) {
      const std::size_t idx = tie_high_ ? cls_.size() - 1 - i : i;
      const double l = empirical_loss(cls_.hypotheses[idx], s, loss_);
      if (l < best - 1e-12) {
        best = l;
        best_i = idx;
      }
    }
    chosen_ = best_i;
  }
  double do_predict(const Instance& x) const override {
    return driftlab::predict(cls_.hypotheses[chosen_], x);
  }

  FiniteHypothesisClass cls_;
  Loss loss_;
  bool tie_high_;
  std::size_t chosen_ = 0;
};

// --- CART decision tree -------------------------------------------------------

TreeParams tree_params_from(const LearnerSpec& spec) {
  TreeParams p;
  p.max_depth = static_cast<int>(spec.get("depth", 10));
  p.min_leaf = static_cast<int>(spec.get("min_leaf", 2));
  p.seed = spec.seed;
  return p;
}

class TreeLearner final : public Learner {
 public:
  explicit TreeLearner(LearnerSpec spec) : Learner(std::move(spec)) {}

 private:
  void do_fit(const Sample& s) override {
    std::vector<double> w(s.points.size(), 1.0);
    tree_.fit(s.points, w, tree_params_from(spec_));
  }
  double do_predict(const Instance& x) const override { return tree_.value(x); }
  CartTree tree_;
};

// --- bagged ensembles (bagging, random forest) ---------------------------------

class BaggedTrees final : public Learner {
 public:
  BaggedTrees(LearnerSpec spec, bool feature_subsample)
      : Learner(std::move(spec)), subsample_(feature_subsample) {}

 private:
  void do_fit(const Sample& s) override {
    const auto n_trees = static_cast<std::size_t>(spec_.get("trees", 10));
    const bool bootstrap = spec_.get("bootstrap", 1.0) != 0.0;
    trees_.assign(n_trees, CartTree());
    TreeParams params = tree_params_from(spec_);
    if (subsample_) {
      const auto d = s.points.front().x.numeric.size() + s.points.front().x.categorical.size();
      params.feature_subsample =
          static_cast<int>(spec_.get("max_features", std::ceil(std::sqrt(static_cast<double>(d)))));
    }
    for (std::size_t t = 0; t < n_trees; ++t) {
      params.seed = Rng::derive({spec_.seed, 0x62616774ULL, t});
      if (!bootstrap) {
        std::vector<double> w(s.points.size(), 1.0);
        trees_[t].fit(s.points, w, params);
        continue;
      }
      Rng rng(params.seed);
      std::vector<LabeledPoint> boot;
      boot.reserve(s.points.size());
      for (std::size_t i = 0; i < s.points.size(); ++i)
        boot.push_back(s.points[rng.below(s.points.size())]);
      std::vector<double> w(boot.size(), 1.0);
      trees_[t].fit(boot, w, params);
    }
  }
  double do_predict(const Instance& x) const override {
    double acc = 0.0;
    for (const CartTree& t : trees_) acc += t.value(x) >= 0.5 ? 1.0 : 0.0;
    return acc / static_cast<double>(trees_.size());
  }

  bool subsample_;
  std::vector<CartTree> trees_;
};

// --- AdaBoost with depth-1 stumps ----------------------------------------------

class AdaBoost final : public Learner {
 public:
  explicit AdaBoost(LearnerSpec spec) : Learner(std::move(spec)) {}

 private:
  void do_fit(const Sample& s) override {
    stumps_.clear();
    alphas_.clear();
    const auto rounds = static_cast<std::size_t>(spec_.get("trees", 10));
    const std::size_t n = s.points.size();
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    TreeParams params = tree_params_from(spec_);
    params.max_depth = static_cast<int>(spec_.get("depth", 1));
    params.min_leaf = 1;
    for (std::size_t r = 0; r < rounds; ++r) {
      CartTree stump;
      stump.fit(s.points, w, params);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Label pred = stump.value(s.points[i].x) >= 0.5 ? 1 : 0;
        if (pred != s.points[i].y) err += w[i];
      }
      err = std::clamp(err, 1e-10, 1.0 - 1e-10);
      if (err >= 0.5 && r > 0) break;  // weak learner no better than chance
      const double alpha = 0.5 * std::log((1.0 - err) / err);
      stumps_.push_back(std::move(stump));
      alphas_.push_back(alpha);
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const Label pred = stumps_.back().value(s.points[i].x) >= 0.5 ? 1 : 0;
        w[i] *= std::exp(pred == s.points[i].y ? -alpha : alpha);
        total += w[i];
      }
      for (double& wi : w) wi /= total;
    }
  }
  double do_predict(const Instance& x) const override {
    double vote1 = 0.0, total = 0.0;
    for (std::size_t t = 0; t < stumps_.size(); ++t) {
      total += alphas_[t];
      if (stumps_[t].value(x) >= 0.5) vote1 += alphas_[t];
    }
    return total > 0.0 ? vote1 / total : 0.5;
  }

  std::vector<CartTree> stumps_;
  std::vector<double> alphas_;
};

// --- k-nearest neighbours -------------------------------------------------------

class KnnLearner final : public Learner {
 public:
  explicit KnnLearner(LearnerSpec spec) : Learner(std::move(spec)) {
    k_ = static_cast<std::size_t>(spec_.get("k", 5));
    cap_ = static_cast<std::size_t>(spec_.get("buffer", 1000));
  }
  bool incremental() const override { return true; }

 private:
  void do_fit(const Sample& s) override {
    // The cap bounds streaming growth; a batch fit keeps its full sample.
    buffer_.assign(s.points.begin(), s.points.end());
    const std::size_t d = s.points.front().x.numeric.size();
    mean_.assign(d, 0.0);
    sd_.assign(d, 1.0);
    for (const LabeledPoint& p : s.points)
      for (std::size_t f = 0; f < d; ++f) mean_[f] += p.x.numeric[f];
    for (double& m : mean_) m /= static_cast<double>(s.points.size());
    std::vector<double> var(d, 0.0);
    for (const LabeledPoint& p : s.points)
      for (std::size_t f = 0; f < d; ++f) {
        const double dv = p.x.numeric[f] - mean_[f];
        var[f] += dv * dv;
      }
    for (std::size_t f = 0; f < d; ++f)
      sd_[f] = std::sqrt(var[f] / static_cast<double>(s.points.size()));
  }

  void do_update(const LabeledPoint& p) override {
    buffer_.push_back(p);
    if (buffer_.size() > cap_) buffer_.pop_front();  // FIFO eviction
  }

  double do_predict(const Instance& x) const override {
    struct Hit {
      double dist;
      std::size_t order;
      Label y;
    };
    std::vector<Hit> hits;
    hits.reserve(buffer_.size());
    std::size_t order = 0;
    for (const LabeledPoint& p : buffer_) {
      double d2 = 0.0;
      for (std::size_t f = 0; f < x.numeric.size(); ++f) {
        const double s = sd_[f] > 1e-12 ? sd_[f] : 1.0;
        const double dv = (x.numeric[f] - p.x.numeric[f]) / s;
        d2 += dv * dv;
      }
      for (std::size_t f = 0; f < x.categorical.size(); ++f)
        if (x.categorical[f] != p.x.categorical[f]) d2 += 1.0;
      hits.push_back(Hit{d2, order++, p.y});
    }
    const std::size_t k = std::min(k_, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<long>(k), hits.end(),
                      [](const Hit& a, const Hit& b) {
                        if (a.dist != b.dist) return a.dist < b.dist;
                        return a.order < b.order;  // insertion order breaks ties
                      });
    double ones = 0.0;
    for (std::size_t i = 0; i < k; ++i) ones += hits[i].y;
    return k > 0 ? ones / static_cast<double>(k) : 0.0;
  }

  std::size_t k_, cap_;
  std::deque<LabeledPoint> buffer_;
  std::vector<double> mean_, sd_;
};

// --- Gaussian / categorical naive Bayes -------------------------------------------

class NaiveBayes final : public Learner {
 public:
  explicit NaiveBayes(LearnerSpec spec) : Learner(std::move(spec)) {}
  bool incremental() const override { return true; }

 private:
  struct ClassStats {
    std::int64_t count = 0;
    std::vector<double> mean, m2;            // Welford running moments
    std::vector<std::map<int, std::int64_t>> cat_counts;
  };

  void do_fit(const Sample& s) override {
    const std::size_t d_num = s.points.front().x.numeric.size();
    const std::size_t d_cat = s.points.front().x.categorical.size();
    for (ClassStats& c : stats_) {
      c.count = 0;
      c.mean.assign(d_num, 0.0);
      c.m2.assign(d_num, 0.0);
      c.cat_counts.assign(d_cat, {});
    }
    for (const LabeledPoint& p : s.points) absorb(p);
  }

  void do_update(const LabeledPoint& p) override { absorb(p); }

  void absorb(const LabeledPoint& p) {
    ClassStats& c = stats_[static_cast<std::size_t>(p.y)];
    ++c.count;
    for (std::size_t f = 0; f < c.mean.size(); ++f) {
      const double delta = p.x.numeric[f] - c.mean[f];
      c.mean[f] += delta / static_cast<double>(c.count);
      c.m2[f] += delta * (p.x.numeric[f] - c.mean[f]);
    }
    for (std::size_t f = 0; f < c.cat_counts.size(); ++f)
      ++c.cat_counts[f][p.x.categorical[f]];
  }

  double log_likelihood(const ClassStats& c, const Instance& x) const {
    double ll = 0.0;
    for (std::size_t f = 0; f < c.mean.size(); ++f) {
      const double var =
          std::max(c.count > 1 ? c.m2[f] / static_cast<double>(c.count - 1) : 1.0, 1e-9);
      const double dv = x.numeric[f] - c.mean[f];
      ll += -0.5 * (std::log(2.0 * 3.141592653589793 * var) + dv * dv / var);
    }
    for (std::size_t f = 0; f < c.cat_counts.size(); ++f) {
      const auto& counts = c.cat_counts[f];
      const auto it = counts.find(x.categorical[f]);
      const double num = 1.0 + static_cast<double>(it == counts.end() ? 0 : it->second);
      const double den = static_cast<double>(c.count) + static_cast<double>(counts.size()) + 1.0;
      ll += std::log(num / den);
    }
    return ll;
  }

  double do_predict(const Instance& x) const override {
    const double n0 = static_cast<double>(stats_[0].count);
    const double n1 = static_cast<double>(stats_[1].count);
    if (n0 == 0.0) return 1.0;  // degenerate single-class fit
    if (n1 == 0.0) return 0.0;
    const double total = n0 + n1;
    const double a0 = std::log(n0 / total) + log_likelihood(stats_[0], x);
    const double a1 = std::log(n1 / total) + log_likelihood(stats_[1], x);
    return sigmoid(a1 - a0);
  }

  std::array<ClassStats, 2> stats_;
};

// --- standardized linear models (perceptron, Pegasos-style linear SVM) -------------

class LinearBase : public Learner {
 public:
  explicit LinearBase(LearnerSpec spec) : Learner(std::move(spec)) {}
  bool incremental() const override { return true; }

 protected:
  void init_from(const Sample& s) {
    encoder_ = Encoder::build(s);
    const std::size_t d = encoder_.width();
    mean_.assign(d, 0.0);
    sd_.assign(d, 1.0);
    std::vector<std::vector<double>> enc;
    enc.reserve(s.points.size());
    for (const LabeledPoint& p : s.points) enc.push_back(encoder_.encode(p.x));
    for (const auto& e : enc)
      for (std::size_t f = 0; f < d; ++f) mean_[f] += e[f];
    for (double& m : mean_) m /= static_cast<double>(enc.size());
    std::vector<double> var(d, 0.0);
    for (const auto& e : enc)
      for (std::size_t f = 0; f < d; ++f) {
        const double dv = e[f] - mean_[f];
        var[f] += dv * dv;
      }
    for (std::size_t f = 0; f < d; ++f) {
      sd_[f] = std::sqrt(var[f] / static_cast<double>(enc.size()));
      if (sd_[f] < 1e-12) sd_[f] = 1.0;
    }
    w_.assign(d, 0.0);
    b_ = 0.0;
  }

  std::vector<double> standardized(const Instance& x) const {
    std::vector<double> z = encoder_.encode(x);
    for (std::size_t f = 0; f < z.size(); ++f) z[f] = (z[f] - mean_[f]) / sd_[f];
    return z;
  }

  double margin(const std::vector<double>& z) const {
    double a = b_;
    for (std::size_t f = 0; f < z.size(); ++f) a += w_[f] * z[f];
    return a;
  }

  double do_predict(const Instance& x) const override { return sigmoid(margin(standardized(x))); }

  Encoder encoder_;
  std::vector<double> mean_, sd_, w_;
  double b_ = 0.0;
};

class PerceptronLearner final : public LinearBase {
 public:
  explicit PerceptronLearner(LearnerSpec spec) : LinearBase(std::move(spec)) {}

 private:
  void do_fit(const Sample& s) override {
    init_from(s);
    const auto epochs = static_cast<std::size_t>(spec_.get("epochs", 5));
    const double lr = spec_.get("lr", 1.0);
    Rng rng(Rng::derive({spec_.seed, 0x70657263ULL}));
    std::vector<std::uint32_t> idx;
    for (std::size_t e = 0; e < epochs; ++e) {
      shuffled_indices(idx, s.points.size(), rng);
      for (auto i : idx) step(s.points[i], lr);
    }
  }
  void do_update(const LabeledPoint& p) override { step(p, spec_.get("lr", 1.0)); }

  void step(const LabeledPoint& p, double lr) {
    const auto z = standardized(p.x);
    const double y = p.y == 1 ? 1.0 : -1.0;
    if (y * margin(z) <= 0.0) {  // mistake-driven rule: no update inside the margin
      for (std::size_t f = 0; f < z.size(); ++f) w_[f] += lr * y * z[f];
      b_ += lr * y;
    }
  }
};

class LinearSvm final : public LinearBase {
 public:
  explicit LinearSvm(LearnerSpec spec) : LinearBase(std::move(spec)) {}

 private:
  void do_fit(const Sample& s) override {
    init_from(s);
    t_ = 0;
    const auto epochs = static_cast<std::size_t>(spec_.get("epochs", 5));
    Rng rng(Rng::derive({spec_.seed, 0x7376736DULL}));
    std::vector<std::uint32_t> idx;
    for (std::size_t e = 0; e < epochs; ++e) {
      shuffled_indices(idx, s.points.size(), rng);
      for (auto i : idx) step(s.points[i]);
    }
  }
  void do_update(const LabeledPoint& p) override { step(p); }

  void step(const LabeledPoint& p) {
    const double lambda = spec_.get("lambda", 1e-4);
    const double lr = 1.0 / (lambda * static_cast<double>(++t_));
    const auto z = standardized(p.x);
    const double y = p.y == 1 ? 1.0 : -1.0;
    const double scale = 1.0 - lr * lambda;
    for (double& wf : w_) wf *= scale;
    if (y * margin(z) < 1.0) {
      for (std::size_t f = 0; f < z.size(); ++f) w_[f] += lr * y * z[f];
      b_ += lr * y;
    }
  }

  std::size_t t_ = 0;
};

}  // namespace

std::unique_ptr<Learner> make_learner(const LearnerSpec& spec) {
  if (spec.kind == "constant") return std::make_unique<ConstantLearner>(spec);
  if (spec.kind == "dt") return std::make_unique<TreeLearner>(spec);
  if (spec.kind == "rf") return std::make_unique<BaggedTrees>(spec, true);
  if (spec.kind == "bagging") return std::make_unique<BaggedTrees>(spec, false);
  if (spec.kind == "adaboost") return std::make_unique<AdaBoost>(spec);
  if (spec.kind == "knn") return std::make_unique<KnnLearner>(spec);
  if (spec.kind == "gnb") return std::make_unique<NaiveBayes>(spec);
  if (spec.kind == "perceptron") return std::make_unique<PerceptronLearner>(spec);
  if (spec.kind == "linear-svm") return std::make_unique<LinearSvm>(spec);
  if (spec.kind == "erm-finite")
    throw std::invalid_argument("erm-finite needs a hypothesis class; use make_erm_learner");
  throw std::invalid_argument("unknown learner kind: " + spec.kind);
}

std::unique_ptr<Learner> make_erm_learner(FiniteHypothesisClass cls, Loss loss, bool tie_high) {
  return std::make_unique<ErmLearner>(std::move(cls), loss, tie_high);
}

}  // namespace driftlab
