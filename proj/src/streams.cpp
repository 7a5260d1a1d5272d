#include "driftlab/streams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace driftlab {

namespace {

const double kPi = 3.14159265358979323846;

FeatureDesc numf(const std::string& name) { return FeatureDesc{name, FeatureDesc::Numeric, {}}; }
FeatureDesc catf(const std::string& name) {
  return FeatureDesc{name, FeatureDesc::Categorical, {}};
}

int maybe_flip(int label, double noise, Rng& rng) {
  if (noise > 0.0 && rng.bernoulli(noise)) return 1 - label;
  return label;
}

DatasetTable gen_sea(const GeneratorConfig& c, std::size_t n) {
  static const double thetas[] = {8.0, 9.0, 7.0, 9.5};
  if (c.concept_id < 1 || c.concept_id > 4) throw std::invalid_argument("sea concept must be 1..4");
  const double theta = thetas[c.concept_id - 1];
  DatasetTable t;
  t.schema = {numf("a1"), numf("a2"), numf("a3")};
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double a1 = rng.uniform(0, 10), a2 = rng.uniform(0, 10), a3 = rng.uniform(0, 10);
    t.rows.push_back(Instance{{a1, a2, a3}, {}});
    t.labels.push_back(maybe_flip(a1 + a2 <= theta ? 1 : 0, c.noise, rng));
  }
  return t;
}

DatasetTable gen_sine(const GeneratorConfig& c, std::size_t n) {
  const double f = static_cast<double>(c.concept_id);
  DatasetTable t;
  t.schema = {numf("x1"), numf("x2")};
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = rng.uniform(), x2 = rng.uniform();
    t.rows.push_back(Instance{{x1, x2}, {}});
    t.labels.push_back(maybe_flip(x2 < std::sin(x1 * kPi * f) ? 1 : 0, c.noise, rng));
  }
  return t;
}

DatasetTable gen_stagger(const GeneratorConfig& c, std::size_t n) {
  DatasetTable t;
  t.schema = {catf("size"), catf("color"), catf("shape")};
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int size = rng.uniform_int(0, 2);   // small, medium, large
    const int color = rng.uniform_int(0, 2);  // red, green, blue
    const int shape = rng.uniform_int(0, 2);  // circle, square, triangle
    int y = 0;
    switch (c.concept_id) {
      case 1: y = (size == 0 && color == 0) ? 1 : 0; break;
      case 2: y = (color == 1 || shape == 0) ? 1 : 0; break;
      case 3: y = (size == 1 || size == 2) ? 1 : 0; break;
      default: throw std::invalid_argument("stagger concept must be 1..3");
    }
    t.rows.push_back(Instance{{}, {size, color, shape}});
    t.labels.push_back(maybe_flip(y, c.noise, rng));
  }
  return t;
}

DatasetTable gen_mixed(const GeneratorConfig& c, std::size_t n) {
  if (c.concept_id > 2)
    throw std::invalid_argument("mixed concepts are 1 (plain) and 2 (inverted)");
  DatasetTable t;
  t.schema = {numf("x"), numf("y"), catf("v"), catf("w")};
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int v = rng.uniform_int(0, 1), w = rng.uniform_int(0, 1);
    const double x = rng.uniform(), y = rng.uniform();
    int met = v + w + (y < 0.5 + 0.3 * std::sin(3.0 * kPi * x) ? 1 : 0);
    int label = met >= 2 ? 1 : 0;
    if (c.concept_id == 2) label = 1 - label;
    t.rows.push_back(Instance{{x, y}, {v, w}});
    t.labels.push_back(maybe_flip(label, c.noise, rng));
  }
  return t;
}

DatasetTable gen_led(const GeneratorConfig& c, std::size_t n) {
  // 7-segment encodings of the digits, order a..g.
  static const int seg[10][7] = {
      {1, 1, 1, 1, 1, 1, 0}, {0, 1, 1, 0, 0, 0, 0}, {1, 1, 0, 1, 1, 0, 1},
      {1, 1, 1, 1, 0, 0, 1}, {0, 1, 1, 0, 0, 1, 1}, {1, 0, 1, 1, 0, 1, 1},
      {1, 0, 1, 1, 1, 1, 1}, {1, 1, 1, 0, 0, 0, 0}, {1, 1, 1, 1, 1, 1, 1},
      {1, 1, 1, 1, 0, 1, 1}};
  DatasetTable t;
  for (int s = 0; s < 7; ++s) t.schema.push_back(catf("seg" + std::to_string(s)));
  for (int s = 0; s < 17; ++s) t.schema.push_back(catf("noise" + std::to_string(s)));
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const int digit = rng.uniform_int(0, 9);
    Instance x;
    for (int s = 0; s < 7; ++s) {
      int bit = seg[digit][s];
      if (c.noise > 0.0 && rng.bernoulli(c.noise)) bit = 1 - bit;  // per-segment flips
      x.categorical.push_back(bit);
    }
    for (int s = 0; s < 17; ++s) x.categorical.push_back(rng.uniform_int(0, 1));
    t.rows.push_back(std::move(x));
    t.labels.push_back(digit);
  }
  return t;
}

DatasetTable gen_agrawal(const GeneratorConfig& c, std::size_t n) {
  if (c.concept_id < 1 || c.concept_id > 3)
    throw std::invalid_argument("agrawal classification functions 1..3 are implemented");
  DatasetTable t;
  // Instance layout is numerics first, categoricals after.
  t.schema = {numf("salary"), numf("commission"), numf("age"), numf("hvalue"), numf("hyears"),
              numf("loan"),   catf("elevel"),     catf("car"), catf("zipcode")};
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double salary = rng.uniform(20000, 150000);
    const double commission = salary >= 75000 ? 0.0 : rng.uniform(10000, 75000);
    const double age = rng.uniform(20, 80);
    const int elevel = rng.uniform_int(0, 4);
    const int car = rng.uniform_int(1, 20);
    const int zipcode = rng.uniform_int(0, 8);
    const double hvalue = (9 - zipcode) * 50000.0 * rng.uniform(0.5, 1.5);
    const double hyears = rng.uniform(1, 30);
    const double loan = rng.uniform(0, 500000);
    int group_b;
    switch (c.concept_id) {
      case 1: group_b = (age < 40 || age >= 60) ? 0 : 1; break;
      case 2:
        if (age < 40)
          group_b = (salary >= 50000 && salary <= 100000) ? 0 : 1;
        else if (age < 60)
          group_b = (salary >= 75000 && salary <= 125000) ? 0 : 1;
        else
          group_b = (salary >= 25000 && salary <= 75000) ? 0 : 1;
        break;
      default:
        if (age < 40)
          group_b = (elevel <= 1) ? 0 : 1;
        else if (age < 60)
          group_b = (elevel >= 1 && elevel <= 3) ? 0 : 1;
        else
          group_b = (elevel >= 2) ? 0 : 1;
        break;
    }
    t.rows.push_back(
        Instance{{salary, commission, age, hvalue, hyears, loan}, {elevel, car, zipcode}});
    t.labels.push_back(maybe_flip(group_b, c.noise, rng));
  }
  return t;
}

DatasetTable gen_random_rbf(const GeneratorConfig& c, std::size_t n) {
  struct Centroid {
    std::vector<double> center;
    int label;
    double weight;
    double spread;
  };
  Rng setup(Rng::derive({c.seed, 0x72626600ULL}));
  std::vector<Centroid> cents;
  double total_w = 0.0;
  for (int k = 0; k < c.centroids; ++k) {
    Centroid ct;
    for (int f = 0; f < c.features; ++f) ct.center.push_back(setup.uniform());
    ct.label = setup.uniform_int(0, 1);
    ct.weight = setup.uniform();
    ct.spread = 0.05 + 0.1 * setup.uniform();
    total_w += ct.weight;
    cents.push_back(std::move(ct));
  }
  DatasetTable t;
  for (int f = 0; f < c.features; ++f) t.schema.push_back(numf("x" + std::to_string(f)));
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    double u = rng.uniform() * total_w;
    std::size_t pick = 0;
    for (; pick + 1 < cents.size(); ++pick) {
      u -= cents[pick].weight;
      if (u <= 0.0) break;
    }
    const Centroid& ct = cents[pick];
    Instance x;
    for (int f = 0; f < c.features; ++f)
      x.numeric.push_back(ct.center[static_cast<std::size_t>(f)] + rng.gaussian() * ct.spread);
    t.rows.push_back(std::move(x));
    t.labels.push_back(maybe_flip(ct.label, c.noise, rng));
  }
  return t;
}

struct RandomTreeNode {
  int feature = -1;
  double threshold = 0.0;
  int label = 0;
  int left = -1, right = -1;
};

void build_random_tree(std::vector<RandomTreeNode>& nodes, int depth, int features,
                       std::vector<std::pair<double, double>> ranges, Rng& rng) {
  RandomTreeNode node;
  const int me = static_cast<int>(nodes.size());
  nodes.push_back(node);
  if (depth == 0) {
    nodes[static_cast<std::size_t>(me)].label = rng.uniform_int(0, 1);
    return;
  }
  const int f = rng.uniform_int(0, features - 1);
  auto& [lo, hi] = ranges[static_cast<std::size_t>(f)];
  const double cut = rng.uniform(lo, hi);
  nodes[static_cast<std::size_t>(me)].feature = f;
  nodes[static_cast<std::size_t>(me)].threshold = cut;
  auto left_ranges = ranges;
  left_ranges[static_cast<std::size_t>(f)].second = cut;
  nodes[static_cast<std::size_t>(me)].left = static_cast<int>(nodes.size());
  build_random_tree(nodes, depth - 1, features, left_ranges, rng);
  auto right_ranges = ranges;
  right_ranges[static_cast<std::size_t>(f)].first = cut;
  nodes[static_cast<std::size_t>(me)].right = static_cast<int>(nodes.size());
  build_random_tree(nodes, depth - 1, features, right_ranges, rng);
}

DatasetTable gen_random_tree(const GeneratorConfig& c, std::size_t n) {
  Rng setup(Rng::derive({c.seed, 0x72747265ULL}));
  std::vector<RandomTreeNode> nodes;
  build_random_tree(nodes, c.depth, c.features,
                    std::vector<std::pair<double, double>>(
                        static_cast<std::size_t>(c.features), {0.0, 1.0}),
                    setup);
  DatasetTable t;
  for (int f = 0; f < c.features; ++f) t.schema.push_back(numf("x" + std::to_string(f)));
  Rng rng(c.seed);
  for (std::size_t i = 0; i < n; ++i) {
    Instance x;
    for (int f = 0; f < c.features; ++f) x.numeric.push_back(rng.uniform());
    int at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
      const auto& nd = nodes[static_cast<std::size_t>(at)];
      at = x.numeric[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    t.rows.push_back(std::move(x));
    t.labels.push_back(maybe_flip(nodes[static_cast<std::size_t>(at)].label, c.noise, rng));
  }
  return t;
}

}  // namespace

std::vector<std::string> builtin_generators() {
  return {"sea", "sine", "stagger", "mixed", "led", "agrawal", "random-rbf", "random-tree"};
}

GeneratorConfig parse_generator(std::string_view text) {
  GeneratorConfig c;
  const auto colon = text.find(':');
  c.generator = std::string(text.substr(0, colon));
  const auto known = builtin_generators();
  if (std::find(known.begin(), known.end(), c.generator) == known.end())
    throw std::invalid_argument("unknown generator: " + c.generator);
  if (colon == std::string_view::npos) return c;
  std::istringstream in{std::string(text.substr(colon + 1))};
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad generator parameter (want key=value): " + tok);
    const std::string key = tok.substr(0, eq);
    const double value = std::stod(tok.substr(eq + 1));
    if (key == "concept") c.concept_id = static_cast<int>(value);
    else if (key == "noise") c.noise = value;
    else if (key == "centroids") c.centroids = static_cast<int>(value);
    else if (key == "features") c.features = static_cast<int>(value);
    else if (key == "depth") c.depth = static_cast<int>(value);
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(value);
    else throw std::invalid_argument("unknown generator parameter: " + key);
  }
  return c;
}

DatasetTable generate(const GeneratorConfig& config, std::size_t n) {
  if (n == 0) throw std::invalid_argument("generate needs n >= 1");
  if (config.noise < 0.0 || config.noise > 1.0)
    throw std::invalid_argument("noise rate must be in [0,1]");
  if (config.concept_id < 1) throw std::invalid_argument("concept index must be >= 1");
  if (config.centroids < 1 || config.features < 1 || config.depth < 1)
    throw std::invalid_argument("generator sizes must be >= 1");
  if (config.generator == "sea") return gen_sea(config, n);
  if (config.generator == "sine") return gen_sine(config, n);
  if (config.generator == "stagger") return gen_stagger(config, n);
  if (config.generator == "mixed") return gen_mixed(config, n);
  if (config.generator == "led") return gen_led(config, n);
  if (config.generator == "agrawal") return gen_agrawal(config, n);
  if (config.generator == "random-rbf") return gen_random_rbf(config, n);
  if (config.generator == "random-tree") return gen_random_tree(config, n);
  throw std::invalid_argument("unknown generator: " + config.generator);
}

DatasetTable load_csv(const std::string& csv_path, const std::string& schema_path) {
  std::ifstream schema_in(schema_path);
  if (!schema_in) throw std::runtime_error("cannot open schema file: " + schema_path);
  struct Col {
    std::string name;
    enum { Num, Cat, Lab } kind;
  };
  std::vector<Col> cols;
  std::string line;
  while (std::getline(schema_in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag, name, kind;
    if (!std::getline(ls, tag, ',') || !std::getline(ls, name, ',') || !std::getline(ls, kind))
      throw std::runtime_error("bad schema line: " + line);
    if (tag != "col") throw std::runtime_error("schema lines must start with 'col': " + line);
    while (!kind.empty() && (kind.back() == '\r' || kind.back() == ' ')) kind.pop_back();
    Col c;
    c.name = name;
    if (kind == "numeric") c.kind = Col::Num;
    else if (kind == "categorical") c.kind = Col::Cat;
    else if (kind == "label") c.kind = Col::Lab;
    else throw std::runtime_error("unknown column kind '" + kind + "' in schema");
    cols.push_back(std::move(c));
  }
  const auto n_label = std::count_if(cols.begin(), cols.end(),
                                     [](const Col& c) { return c.kind == Col::Lab; });
  if (n_label != 1) throw std::runtime_error("schema must declare exactly one label column");

  std::ifstream in(csv_path);
  if (!in) throw std::runtime_error("cannot open csv file: " + csv_path);

  DatasetTable t;
  std::vector<std::map<std::string, int>> cat_maps(cols.size());
  std::map<std::string, int> label_map;
  for (const Col& c : cols) {
    if (c.kind == Col::Num) t.schema.push_back(numf(c.name));
    else if (c.kind == Col::Cat) t.schema.push_back(catf(c.name));
  }
  // numerics come before categoricals in Instance; remember target slots
  std::stable_sort(t.schema.begin(), t.schema.end(), [](const FeatureDesc& a, const FeatureDesc& b) {
    return a.kind < b.kind;
  });

  std::size_t rowno = 0;
  while (std::getline(in, line)) {
    ++rowno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (char ch : line) {
      if (ch == '"') quoted = !quoted;
      else if (ch == ',' && !quoted) {
        fields.push_back(field);
        field.clear();
      } else field.push_back(ch);
    }
    fields.push_back(field);
    if (fields.size() != cols.size())
      throw std::runtime_error("row " + std::to_string(rowno) + ": expected " +
                               std::to_string(cols.size()) + " columns, got " +
                               std::to_string(fields.size()));
    Instance x;
    int label = -1;
    for (std::size_t c = 0; c < cols.size(); ++c) {
      const std::string& v = fields[c];
      switch (cols[c].kind) {
        case Col::Num: {
          try {
            std::size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            x.numeric.push_back(d);
          } catch (const std::exception&) {
            throw std::runtime_error("row " + std::to_string(rowno) + ", column '" +
                                     cols[c].name + "': not numeric: '" + v + "'");
          }
          break;
        }
        case Col::Cat: {
          auto [it, fresh] = cat_maps[c].emplace(v, static_cast<int>(cat_maps[c].size()));
          (void)fresh;
          x.categorical.push_back(it->second);
          break;
        }
        case Col::Lab: {
          auto [it, fresh] = label_map.emplace(v, static_cast<int>(label_map.size()));
          (void)fresh;
          label = it->second;
          break;
        }
      }
    }
    t.rows.push_back(std::move(x));
    t.labels.push_back(label);
  }
  if (t.rows.empty()) throw std::runtime_error("csv has no data rows: " + csv_path);
  return t;
}

DatasetTable permute(const DatasetTable& table, std::uint64_t seed) {
  if (table.rows.empty()) throw std::invalid_argument("cannot permute an empty table");
  std::vector<std::size_t> order(table.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(Rng::derive({seed, 0x7065726DULL}));
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto j = i + rng.below(order.size() - i);
    std::swap(order[i], order[j]);
  }
  DatasetTable out;
  out.schema = table.schema;
  for (std::size_t i : order) {
    out.rows.push_back(table.rows[i]);
    out.labels.push_back(table.labels[i]);
  }
  return out;
}

DatasetTable binarize(const DatasetTable& table, std::uint64_t seed) {
  std::map<int, std::size_t> freq;
  for (int l : table.labels) ++freq[l];
  if (freq.size() < 2) throw std::invalid_argument("binarize needs at least two raw labels");

  std::vector<std::pair<int, std::size_t>> classes(freq.begin(), freq.end());
  std::sort(classes.begin(), classes.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;  // frequency descending
    return a.first < b.first;
  });
  std::map<int, int> group;
  std::size_t count[2] = {0, 0};
  for (const auto& [label, n] : classes) {
    const int g = count[1] < count[0] ? 1 : 0;  // lighter group; ties go to 0
    group[label] = g;
    count[g] += n;
  }

  DatasetTable out;
  out.schema = table.schema;
  const std::size_t minority = std::min(count[0], count[1]);
  const int majority_group = count[0] > count[1] ? 0 : 1;
  std::size_t majority_keep = count[majority_group];
  if (minority * 4 < count[0] + count[1]) majority_keep = 3 * minority;  // enforce >= 25%

  // Seeded subsample of the majority group: keep each row with the running
  // quota, scanning in order after a shuffle of majority positions.
  std::vector<std::size_t> majority_rows;
  for (std::size_t i = 0; i < table.size(); ++i)
    if (group[table.labels[i]] == majority_group) majority_rows.push_back(i);
  std::vector<bool> keep(table.size(), true);
  if (majority_keep < majority_rows.size()) {
    Rng rng(Rng::derive({seed, 0x62696E61ULL}));
    for (std::size_t i = 0; i + 1 < majority_rows.size(); ++i) {
      const auto j = i + rng.below(majority_rows.size() - i);
      std::swap(majority_rows[i], majority_rows[j]);
    }
    for (std::size_t i = majority_keep; i < majority_rows.size(); ++i)
      keep[majority_rows[i]] = false;
  }
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!keep[i]) continue;
    out.rows.push_back(table.rows[i]);
    out.labels.push_back(group[table.labels[i]]);
  }
  return out;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> tree_segment(
    const DatasetTable& table, int depth, std::uint64_t seed) {
  if (table.rows.empty()) throw std::invalid_argument("cannot segment an empty table");
  if (depth < 1) throw std::invalid_argument("segmentation depth must be >= 1");
  for (int attempt = 0; attempt < 100; ++attempt) {
    Rng rng(Rng::derive({seed, 0x73656774ULL, static_cast<std::uint64_t>(attempt)}));
    std::vector<std::vector<std::size_t>> groups{std::vector<std::size_t>()};
    groups[0].resize(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) groups[0][i] = i;
    for (int d = 0; d < depth; ++d) {
      std::vector<std::vector<std::size_t>> next;
      for (auto& g : groups) {
        if (g.empty()) {  // keep leaf numbering aligned
          next.push_back({});
          next.push_back({});
          continue;
        }
        const auto& first = table.rows[g[0]];
        const std::size_t n_features = first.numeric.size() + first.categorical.size();
        const std::size_t f = rng.below(n_features);
        std::vector<std::size_t> left, right;
        if (f < first.numeric.size()) {
          double lo = 1e300, hi = -1e300;
          for (auto i : g) {
            lo = std::min(lo, table.rows[i].numeric[f]);
            hi = std::max(hi, table.rows[i].numeric[f]);
          }
          const double cut = rng.uniform(lo, hi);
          for (auto i : g) (table.rows[i].numeric[f] <= cut ? left : right).push_back(i);
        } else {
          const std::size_t cf = f - first.numeric.size();
          std::vector<int> cats;
          for (auto i : g) cats.push_back(table.rows[i].categorical[cf]);
          std::sort(cats.begin(), cats.end());
          cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
          const int pick = cats[rng.below(cats.size())];
          for (auto i : g) (table.rows[i].categorical[cf] == pick ? left : right).push_back(i);
        }
        next.push_back(std::move(left));
        next.push_back(std::move(right));
      }
      groups = std::move(next);
    }
    std::vector<std::size_t> a, b;
    for (std::size_t leaf_idx = 0; leaf_idx < groups.size(); ++leaf_idx) {
      auto& dst = leaf_idx % 2 == 0 ? a : b;  // alternate leaves between sides
      for (auto i : groups[leaf_idx]) dst.push_back(i);
    }
    if (!a.empty() && !b.empty()) {
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      return {std::move(a), std::move(b)};
    }
  }
  throw std::runtime_error("tree segmentation produced an empty partition after 100 retries");
}

DriftScenario::DriftScenario(DatasetTable table, std::vector<std::size_t> part_a,
                             std::vector<std::size_t> part_b, std::uint64_t seed)
    : table_(std::move(table)), seed_(seed) {
  part_[0] = std::move(part_a);
  part_[1] = std::move(part_b);
  if (part_[0].empty() || part_[1].empty())
    throw std::invalid_argument("scenario partitions must be nonempty");
}

const std::vector<std::size_t>& DriftScenario::partition(int i) const {
  if (i != 0 && i != 1) throw std::invalid_argument("partition index must be 0 or 1");
  return part_[i];
}

Sample DriftScenario::sample(int i, int j, std::size_t n, std::uint64_t seed) const {
  if (n == 0) throw std::invalid_argument("sample needs n >= 1");
  if (j != 0 && j != 1) throw std::invalid_argument("posterior index must be 0 or 1");
  const auto& rows = partition(i);
  Rng rng(Rng::derive({seed_, seed, static_cast<std::uint64_t>(i), 0x73616D70ULL}));
  Sample s;
  s.provenance = "D_" + std::to_string(i) + std::to_string(j);
  s.seed = seed;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t row = rows[rng.below(rows.size())];
    s.points.push_back(
        LabeledPoint{table_.rows[row], inject_real(table_.labels[row], j == 1)});
  }
  return s;
}

std::pair<Sample, Sample> DriftScenario::paired_samples(int i, std::size_t n,
                                                        std::uint64_t seed) const {
  Sample clean = sample(i, 0, n, seed);
  Sample switched = clean;
  switched.provenance = "D_" + std::to_string(i) + "1";
  for (LabeledPoint& p : switched.points) p.y = inject_real(p.y, true);
  return {std::move(clean), std::move(switched)};
}

FiniteDistribution DriftScenario::cell_distribution(int i, int j) const {
  const auto& rows = partition(i);
  std::vector<Atom> atoms;
  const double w = 1.0 / static_cast<double>(rows.size());
  for (std::size_t row : rows)
    atoms.push_back(Atom{w, table_.rows[row], inject_real(table_.labels[row], j == 1)});
  return FiniteDistribution(std::move(atoms)).merged();
}

DriftScenario build_2x2(const DatasetTable& table, int tree_depth, std::uint64_t seed) {
  auto [a, b] = tree_segment(table, tree_depth, seed);
  return DriftScenario(table, std::move(a), std::move(b), seed);
}

Sample sample_window(const DriftScenario& scenario, int i, int j, std::size_t n,
                     std::uint64_t seed) {
  return scenario.sample(i, j, n, seed);
}

Label inject_real(Label y, bool switched) { return switched ? 1 - y : y; }

Sample xor_window_sample(int window, std::size_t n, std::uint64_t seed) {
  if (window != 0 && window != 1) throw std::invalid_argument("xor window must be 0 or 1");
  Rng rng(Rng::derive({seed, 0x786F7257ULL, static_cast<std::uint64_t>(window)}));
  Sample s;
  s.provenance = window == 0 ? "xor[-1,0]" : "xor[0,1]";
  s.seed = seed;
  for (std::size_t i = 0; i < n; ++i) {
    const double x1 = window == 0 ? rng.uniform(-1, 0) : rng.uniform(0, 1);
    const double x2 = rng.uniform(-1, 1);
    s.points.push_back(LabeledPoint{num2(x1, x2), x1 * x2 > 0 ? 1 : 0});
  }
  return s;
}

}  // namespace driftlab
