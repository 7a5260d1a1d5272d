#pragma once

#include <cstdint>
#include <vector>

#include "driftlab/core.hpp"

namespace driftlab {

struct TreeParams {
  int max_depth = 10;
  int min_leaf = 2;
  int feature_subsample = 0;  // 0 = consider every feature at every node
  std::uint64_t seed = 0;
};

/// Binary CART with Gini impurity. Numeric features split at midpoints
/// between adjacent observed values, categorical features by equality with
/// an observed category. Ties break toward the lowest feature index, then
/// the lowest threshold, so training is deterministic.
class CartTree {
 public:
  void fit(const std::vector<LabeledPoint>& points, const std::vector<double>& weights,
           const TreeParams& params);

  /// Class-1 fraction at the leaf reached by x.
  double value(const Instance& x) const;

  bool empty() const { return nodes_.empty(); }

 private:
  struct Node {
    int feature = -1;        // -1: leaf
    bool categorical = false;
    double threshold = 0.0;  // numeric: go left if x <= threshold
    int category = 0;        // categorical: go left if x == category
    int left = -1, right = -1;
    double leaf_value = 0.0;
  };

  int build(const std::vector<LabeledPoint>& points, const std::vector<double>& weights,
            std::vector<std::uint32_t>& idx, int depth, const TreeParams& params,
            std::uint64_t node_key);

  std::vector<Node> nodes_;
};

}  // namespace driftlab
