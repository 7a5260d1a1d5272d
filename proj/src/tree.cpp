#include "tree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "driftlab/rng.hpp"

namespace driftlab {

namespace {

struct SplitChoice {
  double gain = 0.0;
  int feature = -1;
  bool categorical = false;
  double threshold = 0.0;
  int category = 0;

  bool better_than(const SplitChoice& o) const {
    if (gain != o.gain) return gain > o.gain;
    if (feature != o.feature) return feature < o.feature;  // deterministic tie break
    if (categorical != o.categorical) return !categorical;
    if (!categorical) return threshold < o.threshold;
    return category < o.category;
  }
};

double gini(double w0, double w1) {
  const double w = w0 + w1;
  if (w <= 0.0) return 0.0;
  const double p0 = w0 / w, p1 = w1 / w;
  return 1.0 - p0 * p0 - p1 * p1;
}

}  // namespace

int CartTree::build(const std::vector<LabeledPoint>& points, const std::vector<double>& weights,
                    std::vector<std::uint32_t>& idx, int depth, const TreeParams& params,
                    std::uint64_t node_key) {
  double w0 = 0.0, w1 = 0.0;
  for (auto i : idx) (points[i].y == 1 ? w1 : w0) += weights[i];
  const double node_w = w0 + w1;

  Node node;
  node.leaf_value = node_w > 0.0 ? w1 / node_w : 0.0;
  const int me = static_cast<int>(nodes_.size());
  nodes_.push_back(node);

  const bool pure = w0 == 0.0 || w1 == 0.0;
  if (depth >= params.max_depth || pure ||
      idx.size() < 2 * static_cast<std::size_t>(params.min_leaf))
    return me;

  const std::size_t n_num = points.front().x.numeric.size();
  const std::size_t n_cat = points.front().x.categorical.size();
  const std::size_t n_feat = n_num + n_cat;

  std::vector<std::size_t> features(n_feat);
  for (std::size_t f = 0; f < n_feat; ++f) features[f] = f;
  if (params.feature_subsample > 0 &&
      static_cast<std::size_t>(params.feature_subsample) < n_feat) {
    Rng rng(Rng::derive({params.seed, 0x74726565ULL, node_key}));
    for (std::size_t i = 0; i < features.size(); ++i) {  // Fisher-Yates
      const auto j = i + rng.below(features.size() - i);
      std::swap(features[i], features[j]);
    }
    features.resize(static_cast<std::size_t>(params.feature_subsample));
    std::sort(features.begin(), features.end());
  }

  const double base = gini(w0, w1) * node_w;
  SplitChoice best;

  for (std::size_t f : features) {
    if (f < n_num) {
      std::sort(idx.begin(), idx.end(), [&](std::uint32_t a, std::uint32_t b) {
        return points[a].x.numeric[f] < points[b].x.numeric[f];
      });
      double lw0 = 0.0, lw1 = 0.0;
      std::size_t left_n = 0;
      for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const auto& p = points[idx[i]];
        (p.y == 1 ? lw1 : lw0) += weights[idx[i]];
        ++left_n;
        const double v = p.x.numeric[f];
        const double nx = points[idx[i + 1]].x.numeric[f];
        if (nx == v) continue;
        if (left_n < static_cast<std::size_t>(params.min_leaf) ||
            idx.size() - left_n < static_cast<std::size_t>(params.min_leaf))
          continue;
        SplitChoice c;
        c.gain = base - gini(lw0, lw1) * (lw0 + lw1) - gini(w0 - lw0, w1 - lw1) *
                                                          (node_w - lw0 - lw1);
        c.feature = static_cast<int>(f);
        c.threshold = (v + nx) / 2.0;
        if (c.gain > 1e-12 && c.better_than(best)) best = c;
      }
    } else {
      const std::size_t cf = f - n_num;
      std::vector<int> cats;
      for (auto i : idx) cats.push_back(points[i].x.categorical[cf]);
      std::sort(cats.begin(), cats.end());
      cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
      if (cats.size() < 2) continue;
      for (int cat : cats) {
        double lw0 = 0.0, lw1 = 0.0;
        std::size_t left_n = 0;
        for (auto i : idx) {
          if (points[i].x.categorical[cf] == cat) {
            (points[i].y == 1 ? lw1 : lw0) += weights[i];
            ++left_n;
          }
        }
        if (left_n < static_cast<std::size_t>(params.min_leaf) ||
            idx.size() - left_n < static_cast<std::size_t>(params.min_leaf))
          continue;
        SplitChoice c;
        c.gain = base - gini(lw0, lw1) * (lw0 + lw1) - gini(w0 - lw0, w1 - lw1) *
                                                          (node_w - lw0 - lw1);
        c.feature = static_cast<int>(f);
        c.categorical = true;
        c.category = cat;
        if (c.gain > 1e-12 && c.better_than(best)) best = c;
      }
    }
  }

  if (best.feature < 0) return me;

  std::vector<std::uint32_t> left, right;
  for (auto i : idx) {
    bool go_left;
    if (best.categorical)
      go_left = points[i].x.categorical[static_cast<std::size_t>(best.feature) - n_num] ==
                best.category;
    else
      go_left = points[i].x.numeric[static_cast<std::size_t>(best.feature)] <= best.threshold;
    (go_left ? left : right).push_back(i);
  }
  if (left.empty() || right.empty()) return me;

  nodes_[static_cast<std::size_t>(me)].feature = best.feature;
  nodes_[static_cast<std::size_t>(me)].categorical = best.categorical;
  nodes_[static_cast<std::size_t>(me)].threshold = best.threshold;
  nodes_[static_cast<std::size_t>(me)].category = best.category;
  const int l = build(points, weights, left, depth + 1, params, node_key * 2 + 1);
  nodes_[static_cast<std::size_t>(me)].left = l;
  const int r = build(points, weights, right, depth + 1, params, node_key * 2 + 2);
  nodes_[static_cast<std::size_t>(me)].right = r;
  return me;
}

void CartTree::fit(const std::vector<LabeledPoint>& points, const std::vector<double>& weights,
                   const TreeParams& params) {
  nodes_.clear();
  if (points.empty()) throw std::invalid_argument("cannot fit a tree on an empty sample");
  std::vector<std::uint32_t> idx(points.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<std::uint32_t>(i);
  build(points, weights, idx, 0, params, 0);
}

double CartTree::value(const Instance& x) const {
  int at = 0;
  const std::size_t n_num = x.numeric.size();
  while (true) {
    const Node& n = nodes_[static_cast<std::size_t>(at)];
    if (n.feature < 0) return n.leaf_value;
    bool go_left;
    if (n.categorical)
      go_left = x.categorical[static_cast<std::size_t>(n.feature) - n_num] == n.category;
    else
      go_left = x.numeric[static_cast<std::size_t>(n.feature)] <= n.threshold;
    at = go_left ? n.left : n.right;
  }
}

}  // namespace driftlab
