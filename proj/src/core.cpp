#include "driftlab/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

namespace driftlab {

bool instance_less(const Instance& a, const Instance& b) {
  if (a.numeric != b.numeric)
    return std::lexicographical_compare(a.numeric.begin(), a.numeric.end(),
                                        b.numeric.begin(), b.numeric.end());
  return a.categorical < b.categorical;
}

Instance num1(double x) { return Instance{{x}, {}}; }
Instance num2(double x0, double x1) { return Instance{{x0, x1}, {}}; }

Loss parse_loss(std::string_view name) {
  if (name == "zero-one" || name == "01" || name == "zero_one") return Loss::ZeroOne;
  if (name == "mse") return Loss::Mse;
  throw std::invalid_argument("unknown loss: " + std::string(name));
}

std::string loss_name(Loss loss) { return loss == Loss::ZeroOne ? "zero-one" : "mse"; }

FiniteDistribution::FiniteDistribution(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw std::invalid_argument("distribution needs at least one atom");
  n_numeric_ = atoms_.front().x.numeric.size();
  n_categorical_ = atoms_.front().x.categorical.size();
  double total = 0.0;
  for (const Atom& a : atoms_) {
    if (a.weight < 0.0) throw std::invalid_argument("negative atom weight");
    if (a.x.numeric.size() != n_numeric_ || a.x.categorical.size() != n_categorical_)
      throw std::invalid_argument("atoms with mixed schemas");
    for (double v : a.x.numeric)
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
    if (a.y != 0 && a.y != 1) throw std::invalid_argument("labels must be 0 or 1");
    total += a.weight;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw std::invalid_argument("atom weights sum to " + std::to_string(total) + ", expected 1");
}

FiniteDistribution FiniteDistribution::merged() const {
  std::vector<Atom> sorted = atoms_;
  std::sort(sorted.begin(), sorted.end(), [](const Atom& a, const Atom& b) {
    if (a.x == b.x) return a.y < b.y;
    return instance_less(a.x, b.x);
  });
  std::vector<Atom> out;
  for (const Atom& a : sorted) {
    if (!out.empty() && out.back().x == a.x && out.back().y == a.y)
      out.back().weight += a.weight;
    else
      out.push_back(a);
  }
  return FiniteDistribution(std::move(out));
}

std::vector<Instance> FiniteDistribution::support() const {
  const FiniteDistribution canon = merged();
  std::vector<Instance> xs;
  for (const Atom& a : canon.atoms()) {
    if (xs.empty() || !(xs.back() == a.x)) xs.push_back(a.x);
  }
  return xs;
}

FiniteDistribution::Posterior FiniteDistribution::posterior_at(const Instance& x) const {
  double mass = 0.0, mass1 = 0.0;
  for (const Atom& a : atoms_) {
    if (a.x == x) {
      mass += a.weight;
      if (a.y == 1) mass1 += a.weight;
    }
  }
  Posterior p;
  p.mass = mass;
  p.p1 = mass > 0.0 ? mass1 / mass : 0.0;
  return p;
}

FiniteDistribution dirac(const Instance& x, Label y) {
  return FiniteDistribution({Atom{1.0, x, y}});
}

FiniteDistribution uniform_mix(const std::vector<std::pair<double, Label>>& points) {
  std::vector<Atom> atoms;
  const double w = 1.0 / static_cast<double>(points.size());
  for (const auto& [x, y] : points) atoms.push_back(Atom{w, num1(x), y});
  return FiniteDistribution(std::move(atoms));
}

FiniteDistribution mix(const FiniteDistribution& lhs, const FiniteDistribution& rhs, double a) {
  std::vector<Atom> atoms;
  for (const Atom& at : lhs.atoms()) atoms.push_back(Atom{a * at.weight, at.x, at.y});
  for (const Atom& at : rhs.atoms()) atoms.push_back(Atom{(1.0 - a) * at.weight, at.x, at.y});
  return FiniteDistribution(std::move(atoms)).merged();
}

double total_variation(const FiniteDistribution& a, const FiniteDistribution& b) {
  const auto ma = a.merged();
  const auto mb = b.merged();
  auto key_less = [](const Atom& l, const Atom& r) {
    if (l.x == r.x) return l.y < r.y;
    return instance_less(l.x, r.x);
  };
  double tv = 0.0;
  std::size_t i = 0, j = 0;
  const auto& xs = ma.atoms();
  const auto& ys = mb.atoms();
  while (i < xs.size() || j < ys.size()) {
    if (j == ys.size() || (i < xs.size() && key_less(xs[i], ys[j]))) {
      tv += xs[i++].weight;
    } else if (i == xs.size() || key_less(ys[j], xs[i])) {
      tv += ys[j++].weight;
    } else {
      tv += std::abs(xs[i].weight - ys[j].weight);
      ++i;
      ++j;
    }
  }
  return tv / 2.0;
}

DriftProcess::DriftProcess(std::vector<TimePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("process needs at least one timepoint");
  double total = 0.0;
  const auto& first = points_.front().dist;
  for (const TimePoint& tp : points_) {
    if (tp.p <= 0.0) throw std::invalid_argument("timepoints with zero mass are disallowed");
    if (tp.dist.numeric_features() != first.numeric_features() ||
        tp.dist.categorical_features() != first.categorical_features())
      throw std::invalid_argument("timepoints with mixed schemas");
    total += tp.p;
  }
  if (std::abs(total - 1.0) > kWeightTol)
    throw std::invalid_argument("P_T masses sum to " + std::to_string(total));
}

std::vector<Instance> DriftProcess::domain() const {
  std::vector<Instance> xs;
  for (const TimePoint& tp : points_) {
    for (const Instance& x : tp.dist.support()) xs.push_back(x);
  }
  std::sort(xs.begin(), xs.end(), instance_less);
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

DriftProcess uniform_process(std::vector<FiniteDistribution> dists) {
  std::vector<TimePoint> points;
  const double p = 1.0 / static_cast<double>(dists.size());
  for (auto& d : dists) points.push_back(TimePoint{p, std::move(d)});
  return DriftProcess(std::move(points));
}

static void check_window(const DriftProcess& process, const TimeWindow& w) {
  if (w.indices.empty()) throw std::invalid_argument("empty time window");
  for (std::size_t i : w.indices)
    if (i >= process.size())
      throw std::invalid_argument("window references out-of-range timepoint " + std::to_string(i));
}

FiniteDistribution mean_distribution(const DriftProcess& process, const TimeWindow& w) {
  check_window(process, w);
  double mass = 0.0;
  for (std::size_t i : w.indices) mass += process.timepoints()[i].p;
  std::vector<Atom> atoms;
  for (std::size_t i : w.indices) {
    const TimePoint& tp = process.timepoints()[i];
    for (const Atom& a : tp.dist.atoms())
      atoms.push_back(Atom{tp.p / mass * a.weight, a.x, a.y});
  }
  return FiniteDistribution(std::move(atoms)).merged();
}

double expected_loss(const PredictFn& predict, const FiniteDistribution& d, Loss loss) {
  double acc = 0.0;
  for (const Atom& a : d.atoms()) acc += a.weight * point_loss(predict(a.x), a.y, loss);
  return acc;
}

double empirical_loss(const PredictFn& predict, const Sample& s, Loss loss) {
  if (s.points.empty()) throw std::invalid_argument("empirical loss of an empty sample");
  double acc = 0.0;
  for (const LabeledPoint& p : s.points) acc += point_loss(predict(p.x), p.y, loss);
  return acc / static_cast<double>(s.points.size());
}

Sample draw_sample(const FiniteDistribution& d, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  Rng rng(seed);
  std::vector<double> cdf;
  cdf.reserve(d.size());
  double acc = 0.0;
  for (const Atom& a : d.atoms()) {
    acc += a.weight;
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;
  Sample s;
  s.seed = seed;
  s.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto& a = d.atoms()[static_cast<std::size_t>(it - cdf.begin())];
    s.points.push_back(LabeledPoint{a.x, a.y});
  }
  return s;
}

std::vector<std::int64_t> draw_counts(const FiniteDistribution& d, std::size_t n, Rng& rng) {
  std::vector<double> cdf;
  cdf.reserve(d.size());
  double acc = 0.0;
  for (const Atom& a : d.atoms()) {
    acc += a.weight;
    cdf.push_back(acc);
  }
  cdf.back() = 1.0;
  std::vector<std::int64_t> counts(d.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    ++counts[static_cast<std::size_t>(it - cdf.begin())];
  }
  return counts;
}

bool has_distribution_drift(const DriftProcess& process, double tol) {
  const auto& pts = process.timepoints();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (total_variation(pts[i].dist, pts[j].dist) > tol) return true;
  return false;
}

static std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_process(const DriftProcess& process) {
  std::ostringstream out;
  const auto& first = process.timepoints().front().dist;
  out << "schema=" << first.numeric_features() << "," << first.categorical_features() << "\n";
  for (std::size_t t = 0; t < process.size(); ++t) {
    const TimePoint& tp = process.timepoints()[t];
    for (const Atom& a : tp.dist.atoms()) {
      out << "t=" << t << " p_t=" << fmt_real(tp.p) << " w=" << fmt_real(a.weight) << " x=";
      bool comma = false;
      for (double v : a.x.numeric) {
        if (comma) out << ",";
        out << fmt_real(v);
        comma = true;
      }
      for (int c : a.x.categorical) {
        if (comma) out << ",";
        out << c;
        comma = true;
      }
      out << " y=" << a.y << "\n";
    }
  }
  return out.str();
}

DriftProcess parse_process(std::string_view text) {
  std::map<std::size_t, std::pair<double, std::vector<Atom>>> by_time;
  std::size_t n_numeric = SIZE_MAX, n_categorical = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (line.rfind("schema=", 0) == 0) {
      if (std::sscanf(line.c_str(), "schema=%zu,%zu", &n_numeric, &n_categorical) != 2)
        throw std::invalid_argument("bad schema line at " + std::to_string(lineno));
      continue;
    }
    std::size_t t = 0;
    double p = 0.0, w = 0.0;
    int y = -1;
    char xs[512] = {0};
    if (std::sscanf(line.c_str(), "t=%zu p_t=%lf w=%lf x=%511s y=%d", &t, &p, &w, xs, &y) != 5)
      throw std::invalid_argument("bad atom line at " + std::to_string(lineno) + ": " + line);
    std::vector<double> values;
    std::istringstream xin(xs);
    std::string tok;
    while (std::getline(xin, tok, ',')) values.push_back(std::stod(tok));
    if (n_numeric == SIZE_MAX) n_numeric = values.size();
    if (values.size() != n_numeric + n_categorical)
      throw std::invalid_argument("wrong feature count at line " + std::to_string(lineno));
    Instance x;
    x.numeric.assign(values.begin(), values.begin() + static_cast<long>(n_numeric));
    for (std::size_t i = n_numeric; i < values.size(); ++i)
      x.categorical.push_back(static_cast<int>(values[i]));
    auto& slot = by_time[t];
    slot.first = p;
    slot.second.push_back(Atom{w, std::move(x), y});
  }
  if (by_time.empty()) throw std::invalid_argument("no atoms in process text");
  std::vector<TimePoint> points;
  std::size_t expect = 0;
  for (auto& [t, slot] : by_time) {
    if (t != expect++)
      throw std::invalid_argument("timepoint indices must be contiguous from 0");
    points.push_back(TimePoint{slot.first, FiniteDistribution(std::move(slot.second))});
  }
  return DriftProcess(std::move(points));
}

}  // namespace driftlab
