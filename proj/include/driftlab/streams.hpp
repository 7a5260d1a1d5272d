#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/core.hpp"

namespace driftlab {

struct FeatureDesc {
  enum Kind { Numeric, Categorical };
  std::string name;
  Kind kind = Numeric;
  std::vector<std::string> category_names;  // CSV ingestion only
};

/// Rows with raw integer labels, before binarization.
struct DatasetTable {
  std::vector<FeatureDesc> schema;
  std::vector<Instance> rows;
  std::vector<int> labels;

  std::size_t size() const { return rows.size(); }
};

/// Synthetic generator selection, parsable from strings like
/// "sea:concept=2,noise=0.0,seed=7".
struct GeneratorConfig {
  std::string generator;  // sea | sine | stagger | mixed | led | agrawal |
                          // random-rbf | random-tree
  int concept_id = 1;
  double noise = 0.0;
  int centroids = 15;    // random-rbf
  int features = 5;      // random-rbf / random-tree
  int depth = 5;         // random-tree
  std::uint64_t seed = 0;
};

GeneratorConfig parse_generator(std::string_view text);
std::vector<std::string> builtin_generators();

DatasetTable generate(const GeneratorConfig& config, std::size_t n);

/// CSV ingestion with a plain-text schema descriptor:
///   col,<name>,<numeric|categorical|label>   (one line per column)
DatasetTable load_csv(const std::string& csv_path, const std::string& schema_path);

/// Uniform random permutation of rows (Fisher-Yates).
DatasetTable permute(const DatasetTable& table, std::uint64_t seed);

/// Greedy two-group label partition by descending frequency; subsamples the
/// majority group when needed so the minority share is at least 25%.
DatasetTable binarize(const DatasetTable& table, std::uint64_t seed);

/// Leaf partition of the rows by a random decision tree (random feature,
/// random split within the observed range); leaves alternate between the
/// two sides. Retries with derived seeds until both sides are nonempty.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> tree_segment(
    const DatasetTable& table, int depth, std::uint64_t seed);

/// The controlled 2x2 grid D_ij(X,Y) = D_i(X) D_j(Y|X): instance marginals
/// from the tree partition (i), posteriors original or label-switched (j).
class DriftScenario {
 public:
  DriftScenario(DatasetTable table, std::vector<std::size_t> part_a,
                std::vector<std::size_t> part_b, std::uint64_t seed);

  const DatasetTable& table() const { return table_; }
  const std::vector<std::size_t>& partition(int i) const;

  /// i.i.d. rows (with replacement) from D_ij.
  Sample sample(int i, int j, std::size_t n, std::uint64_t seed) const;

  /// The cell as a finite distribution (uniform over partition rows),
  /// connecting the scenario to the exact oracles.
  FiniteDistribution cell_distribution(int i, int j) const;

  /// Both cells of one row stream share instances; j only flips labels.
  std::pair<Sample, Sample> paired_samples(int i, std::size_t n, std::uint64_t seed) const;

 private:
  DatasetTable table_;
  std::vector<std::size_t> part_[2];
  std::uint64_t seed_ = 0;
};

DriftScenario build_2x2(const DatasetTable& table, int tree_depth, std::uint64_t seed);

Sample sample_window(const DriftScenario& scenario, int i, int j, std::size_t n,
                     std::uint64_t seed);

/// Posterior flip y -> 1-y when `switched`; marginal untouched.
Label inject_real(Label y, bool switched);

/// Continuous XOR construction: window 0 draws X uniformly from
/// [-1,0]x[-1,1], window 1 from [0,1]x[-1,1], labels 1[x1*x2 > 0].
Sample xor_window_sample(int window, std::size_t n, std::uint64_t seed);

}  // namespace driftlab
