#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "doctest.h"
#include "driftlab/oracle.hpp"
#include "driftlab/streams.hpp"

using namespace driftlab;

namespace {

std::vector<std::pair<Instance, int>> row_multiset(const DatasetTable& t) {
  std::vector<std::pair<Instance, int>> rows;
  for (std::size_t i = 0; i < t.size(); ++i) rows.emplace_back(t.rows[i], t.labels[i]);
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.first == b.first) return a.second < b.second;
    return instance_less(a.first, b.first);
  });
  return rows;
}

}  // namespace

TEST_CASE("generator rules: SEA threshold, LED without noise, random tree self-consistency") {
  {
    const auto t = generate(parse_generator("sea:concept=1,seed=5"), 500);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const auto& x = t.rows[i];
      CHECK(t.labels[i] == (x.numeric[0] + x.numeric[1] <= 8.0 ? 1 : 0));
    }
  }
  {
    const auto t = generate(parse_generator("led:seed=6"), 300);
    // Without noise the 7 relevant segments determine the digit uniquely.
    std::map<std::vector<int>, int> seen;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::vector<int> key(t.rows[i].categorical.begin(), t.rows[i].categorical.begin() + 7);
      const auto it = seen.find(key);
      if (it == seen.end()) seen[key] = t.labels[i];
      else CHECK(it->second == t.labels[i]);
    }
    CHECK(seen.size() == 10);
  }
  {
    const auto cfg = parse_generator("random-tree:depth=4,features=3,seed=11");
    const auto a = generate(cfg, 400);
    const auto b = generate(cfg, 400);  // same seed: labels ride the same tree
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a.labels[i] == b.labels[i]);
  }
  {
    const auto t = generate(parse_generator("sine:concept=1,seed=3"), 400);
    for (std::size_t i = 0; i < t.size(); ++i)
      CHECK(t.labels[i] ==
            (t.rows[i].numeric[1] < std::sin(t.rows[i].numeric[0] * 3.14159265358979) ? 1 : 0));
  }
  CHECK_THROWS_AS(generate(parse_generator("agrawal:concept=7"), 10), std::invalid_argument);
}

TEST_CASE("every builtin generator emits consistent schemas") {
  for (const std::string& g : builtin_generators()) {
    const auto t = generate(parse_generator(g + ":seed=2"), 64);
    REQUIRE(t.size() == 64);
    const std::size_t n_num = t.rows.front().numeric.size();
    const std::size_t n_cat = t.rows.front().categorical.size();
    CHECK(t.schema.size() == n_num + n_cat);
    for (const auto& r : t.rows) {
      CHECK(r.numeric.size() == n_num);
      CHECK(r.categorical.size() == n_cat);
    }
    std::set<int> labels(t.labels.begin(), t.labels.end());
    CHECK(labels.size() >= 2);
  }
}

TEST_CASE("permute: single row unchanged, seeded determinism, multiset preserved") {
  const auto t = generate(parse_generator("sea:seed=9"), 200);
  const auto p1 = permute(t, 4);
  const auto p2 = permute(t, 4);
  const auto p3 = permute(t, 5);
  CHECK(row_multiset(p1) == row_multiset(t));
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(p1.rows[i] == p2.rows[i]);
  bool any_moved = false;
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!(p1.rows[i] == p3.rows[i])) any_moved = true;
  CHECK(any_moved);

  DatasetTable single;
  single.schema = t.schema;
  single.rows = {t.rows[0]};
  single.labels = {t.labels[0]};
  const auto ps = permute(single, 123);
  CHECK(ps.rows[0] == t.rows[0]);
}

TEST_CASE("binarize: equal pair, greedy three-way split, imbalance subsampling") {
  auto table_with = [](std::vector<std::size_t> class_counts) {
    DatasetTable t;
    t.schema = {FeatureDesc{"x", FeatureDesc::Numeric, {}}};
    int label = 0;
    for (std::size_t c : class_counts) {
      for (std::size_t i = 0; i < c; ++i) {
        t.rows.push_back(num1(static_cast<double>(t.rows.size())));
        t.labels.push_back(label);
      }
      ++label;
    }
    return t;
  };
  {
    const auto b = binarize(table_with({50, 50}), 1);
    std::size_t ones = 0;
    for (int l : b.labels) ones += l;
    CHECK(b.size() == 100);
    CHECK(ones == 50);
  }
  {
    // Shares (0.5, 0.3, 0.2): largest goes alone, the rest balance it.
    const auto b = binarize(table_with({50, 30, 20}), 1);
    std::size_t ones = 0;
    for (int l : b.labels) ones += l;
    CHECK(b.size() == 100);
    CHECK(ones == 50);
  }
  {
    // Shares (0.9, 0.1): majority subsampled to 3x minority.
    const auto b = binarize(table_with({90, 10}), 1);
    std::size_t ones = 0;
    for (int l : b.labels) ones += l;
    CHECK(ones == 10);          // minority intact
    CHECK(b.size() == 40);      // 30 majority + 10 minority
  }
  CHECK_THROWS_AS(binarize(table_with({25}), 1), std::invalid_argument);
}

TEST_CASE("inject_real is an involution that complements a perfect model") {
  CHECK(inject_real(1, false) == 1);
  CHECK(inject_real(inject_real(0, true), true) == 0);
  const auto t = generate(parse_generator("sea:seed=14"), 300);
  const auto scen = build_2x2(binarize(t, 2), 3, 77);
  auto [clean, flipped] = scen.paired_samples(0, 200, 5);
  std::size_t agree = 0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    CHECK(clean.points[i].x == flipped.points[i].x);
    if (clean.points[i].y == flipped.points[i].y) ++agree;
  }
  CHECK(agree == 0);
}

TEST_CASE("tree segmentation partitions the rows") {
  const auto t = binarize(generate(parse_generator("sea:seed=21"), 400), 3);
  const auto [a, b] = tree_segment(t, 3, 99);
  CHECK(!a.empty());
  CHECK(!b.empty());
  CHECK(a.size() + b.size() == t.size());
  std::vector<std::size_t> all;
  all.insert(all.end(), a.begin(), a.end());
  all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i] == i);

  // depth=1 on 1-D numeric data gives the two half-spaces of one split.
  DatasetTable line;
  line.schema = {FeatureDesc{"x", FeatureDesc::Numeric, {}}};
  for (int i = 0; i < 100; ++i) {
    line.rows.push_back(num1(i));
    line.labels.push_back(i % 2);
  }
  const auto [l, r] = tree_segment(line, 1, 5);
  double max_l = -1e300, min_r = 1e300;
  for (auto i : l) max_l = std::max(max_l, line.rows[i].numeric[0]);
  for (auto i : r) min_r = std::min(min_r, line.rows[i].numeric[0]);
  CHECK(max_l < min_r);
}

TEST_CASE("2x2 scenario factorization: marginals by i, posteriors by j") {
  const auto t = binarize(generate(parse_generator("sine:seed=33"), 600), 4);
  const auto scen = build_2x2(t, 3, 1234);

  // D_i0 and D_i1 share the instance marginal: same seed, same instances.
  for (int i : {0, 1}) {
    const auto s0 = scen.sample(i, 0, 100, 42);
    const auto s1 = scen.sample(i, 1, 100, 42);
    for (std::size_t k = 0; k < s0.size(); ++k) {
      CHECK(s0.points[k].x == s1.points[k].x);
      CHECK(s0.points[k].y == 1 - s1.points[k].y);
    }
  }

  // The posterior map is the same function across partitions: no real drift
  // between D_00 and D_10, real drift between D_i0 and D_i1.
  const auto d00 = scen.cell_distribution(0, 0);
  const auto d10 = scen.cell_distribution(1, 0);
  const auto d01 = scen.cell_distribution(0, 1);
  const auto p = DriftProcess({{0.25, d00}, {0.25, d10}, {0.25, d01},
                               {0.25, scen.cell_distribution(1, 1)}});
  CHECK_FALSE(has_real_drift(p, TimeWindow::single(0), TimeWindow::single(1)));
  CHECK(has_real_drift(p, TimeWindow::single(0), TimeWindow::single(2)));

  // Sampling determinism and the empirical label rate.
  const auto a = scen.sample(0, 0, 500, 7);
  const auto b = scen.sample(0, 0, 500, 7);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a.points[k].x == b.points[k].x);
    CHECK(a.points[k].y == b.points[k].y);
  }
  double rate = 0.0;
  const auto big = scen.sample(0, 0, 20000, 8);
  for (const auto& pt : big.points) rate += pt.y;
  rate /= static_cast<double>(big.size());
  double true_rate = 0.0;
  for (const Atom& atom : d00.atoms())
    if (atom.y == 1) true_rate += atom.weight;
  CHECK(rate == doctest::Approx(true_rate).epsilon(0.05));
  CHECK(std::abs(rate - true_rate) < 0.02);
}

TEST_CASE("csv loading with schema descriptors") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "driftlab_csv_test";
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "rows.csv");
    csv << "3.5,red,1\n2.0,blue,0\n1.25,red,1\n";
    std::ofstream schema(dir / "cols.schema");
    schema << "col,height,numeric\ncol,color,categorical\ncol,target,label\n";
  }
  const auto t = load_csv((dir / "rows.csv").string(), (dir / "cols.schema").string());
  REQUIRE(t.size() == 3);
  CHECK(t.rows[0].numeric[0] == 3.5);
  CHECK(t.rows[0].categorical[0] == t.rows[2].categorical[0]);
  CHECK(t.rows[0].categorical[0] != t.rows[1].categorical[0]);
  CHECK(t.labels[0] == t.labels[2]);

  {
    std::ofstream csv(dir / "empty.csv");
    csv << "";
  }
  CHECK_THROWS(load_csv((dir / "empty.csv").string(), (dir / "cols.schema").string()));

  {
    std::ofstream csv(dir / "bad.csv");
    csv << "3.5,red,1\noops,blue,0\n";
  }
  try {
    load_csv((dir / "bad.csv").string(), (dir / "cols.schema").string());
    CHECK(false);
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("row 2") != std::string::npos);
  }
}

TEST_CASE("stream edge cases raise domain errors") {
  CHECK_THROWS_AS(generate(parse_generator("sea"), 0), std::invalid_argument);
  DatasetTable empty;
  CHECK_THROWS_AS(permute(empty, 1), std::invalid_argument);
  CHECK_THROWS_AS(tree_segment(empty, 3, 1), std::invalid_argument);
}

TEST_CASE("csv fields may quote their separators") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "driftlab_csv_quoted";
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / "rows.csv");
    csv << "1.5,\"red, dark\",1\n2.5,blue,0\n";
    std::ofstream schema(dir / "cols.schema");
    schema << "col,height,numeric\ncol,color,categorical\ncol,target,label\n";
  }
  const auto t = load_csv((dir / "rows.csv").string(), (dir / "cols.schema").string());
  REQUIRE(t.size() == 2);
  CHECK(t.rows[0].categorical[0] != t.rows[1].categorical[0]);
}

TEST_CASE("xor windows are separable alone and carry no real drift information") {
  const auto w0 = xor_window_sample(0, 500, 3);
  const auto w1 = xor_window_sample(1, 500, 3);
  for (const auto& p : w0.points) {
    CHECK(p.x.numeric[0] <= 0.0);
    CHECK(p.y == (p.x.numeric[1] < 0 ? 1 : 0));
  }
  for (const auto& p : w1.points) {
    CHECK(p.x.numeric[0] >= 0.0);
    CHECK(p.y == (p.x.numeric[1] > 0 ? 1 : 0));
  }
}
