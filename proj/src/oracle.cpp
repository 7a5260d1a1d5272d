#include "driftlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace driftlab {

namespace {

struct PredictVisitor {
  const Instance& x;

  double operator()(const ThresholdHyp& h) const {
    const double v = x.numeric.at(h.feature);
    return (h.greater ? v > h.theta : v < h.theta) ? 1.0 : 0.0;
  }
  double operator()(const SetIndicatorHyp& h) const {
    for (const Instance& m : h.members)
      if (m == x) return 1.0;
    return 0.0;
  }
  double operator()(const TabularHyp& h) const {
    auto it = std::lower_bound(
        h.values.begin(), h.values.end(), x,
        [](const std::pair<Instance, double>& e, const Instance& k) {
          return instance_less(e.first, k);
        });
    if (it != h.values.end() && it->first == x) return it->second;
    return h.fallback;
  }
  double operator()(const LinearHyp& h) const {
    double s = h.bias;
    for (std::size_t i = 0; i < h.weights.size(); ++i) s += h.weights[i] * x.numeric.at(i);
    return s > 0.0 ? 1.0 : 0.0;
  }
  double operator()(const ConstantHyp& h) const { return h.value; }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

}  // namespace

double predict(const Hypothesis& h, const Instance& x) {
  return std::visit(PredictVisitor{x}, h);
}

std::string describe(const Hypothesis& h) {
  struct V {
    std::string operator()(const ThresholdHyp& t) const {
      return "1[x" + std::to_string(t.feature) + (t.greater ? ">" : "<") + fmt(t.theta) + "]";
    }
    std::string operator()(const SetIndicatorHyp& s) const {
      std::string out = "1[x in {";
      for (std::size_t i = 0; i < s.members.size(); ++i) {
        if (i) out += ",";
        for (std::size_t j = 0; j < s.members[i].numeric.size(); ++j) {
          if (j) out += " ";
          out += fmt(s.members[i].numeric[j]);
        }
      }
      return out + "}]";
    }
    std::string operator()(const TabularHyp& t) const {
      return "table(" + std::to_string(t.values.size()) + " entries)";
    }
    std::string operator()(const LinearHyp& l) const {
      std::string out = "1[";
      for (std::size_t i = 0; i < l.weights.size(); ++i)
        out += (i ? " + " : "") + fmt(l.weights[i]) + "*x" + std::to_string(i);
      return out + " + " + fmt(l.bias) + " > 0]";
    }
    std::string operator()(const ConstantHyp& c) const { return "const(" + fmt(c.value) + ")"; }
  };
  return std::visit(V{}, h);
}

double expected_loss(const Hypothesis& h, const FiniteDistribution& d, Loss loss) {
  double acc = 0.0;
  for (const Atom& a : d.atoms()) acc += a.weight * point_loss(predict(h, a.x), a.y, loss);
  return acc;
}

double empirical_loss(const Hypothesis& h, const Sample& s, Loss loss) {
  if (s.points.empty()) throw std::invalid_argument("empirical loss of an empty sample");
  double acc = 0.0;
  for (const LabeledPoint& p : s.points) acc += point_loss(predict(h, p.x), p.y, loss);
  return acc / static_cast<double>(s.points.size());
}

FiniteHypothesisClass threshold_grid(std::span<const double> coords, std::size_t feature) {
  std::vector<double> xs(coords.begin(), coords.end());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (xs.empty()) throw std::invalid_argument("threshold grid needs support coordinates");
  std::vector<Hypothesis> hs;
  hs.push_back(ThresholdHyp{feature, xs.front() - 1.0, true});  // predicts 1 everywhere
  for (std::size_t i = 0; i + 1 < xs.size(); ++i)
    hs.push_back(ThresholdHyp{feature, (xs[i] + xs[i + 1]) / 2.0, true});
  hs.push_back(ThresholdHyp{feature, xs.back() + 1.0, true});  // predicts 0 everywhere
  return FiniteHypothesisClass(std::move(hs));
}

FiniteHypothesisClass threshold_grid(const DriftProcess& process, std::size_t feature) {
  std::vector<double> coords;
  for (const Instance& x : process.domain()) coords.push_back(x.numeric.at(feature));
  return threshold_grid(coords, feature);
}

FiniteHypothesisClass tabular_universal_class(std::span<const Instance> support,
                                              std::size_t grid) {
  if (support.empty()) throw std::invalid_argument("tabular class needs a support");
  if (grid < 2) throw std::invalid_argument("tabular grid must be >= 2");
  double log_size = static_cast<double>(support.size()) * std::log(static_cast<double>(grid));
  if (log_size > std::log(1e6))
    throw std::length_error("tabular class would exceed the 1e6 cap; use the factored oracle");
  std::vector<Instance> xs(support.begin(), support.end());
  std::sort(xs.begin(), xs.end(), instance_less);
  const std::size_t n = xs.size();
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= grid;
  std::vector<Hypothesis> hs;
  hs.reserve(total);
  std::vector<std::size_t> digits(n, 0);
  for (std::size_t id = 0; id < total; ++id) {
    TabularHyp t;
    for (std::size_t i = 0; i < n; ++i)
      t.values.emplace_back(xs[i],
                            static_cast<double>(digits[i]) / static_cast<double>(grid - 1));
    hs.push_back(std::move(t));
    for (std::size_t i = 0; i < n; ++i) {  // odometer increment
      if (++digits[i] < grid) break;
      digits[i] = 0;
    }
  }
  return FiniteHypothesisClass(std::move(hs));
}

namespace {

std::vector<double> all_losses(const FiniteHypothesisClass& H, const FiniteDistribution& d,
                               Loss loss) {
  std::vector<double> out;
  out.reserve(H.size());
  for (const Hypothesis& h : H.hypotheses) out.push_back(expected_loss(h, d, loss));
  return out;
}

double min_of(const std::vector<double>& v) { return *std::min_element(v.begin(), v.end()); }

}  // namespace

std::vector<std::size_t> argmin_set(const FiniteHypothesisClass& H, const FiniteDistribution& d,
                                    Loss loss, double tol) {
  const auto losses = all_losses(H, d, loss);
  const double lo = min_of(losses);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < losses.size(); ++i)
    if (losses[i] <= lo + tol) idx.push_back(i);
  return idx;
}

StrongResult check_strong_H(const DriftProcess& process, const FiniteHypothesisClass& H,
                            Loss loss, const TimeWindow& w1, const TimeWindow& w2, double tol) {
  const auto d1 = mean_distribution(process, w1);
  const auto d2 = mean_distribution(process, w2);
  const auto l1 = all_losses(H, d1, loss);
  const auto l2 = all_losses(H, d2, loss);
  const double m1 = min_of(l1);
  const double m2 = min_of(l2);
  bool disjoint = true;
  double min_gap_sum = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double gap_sum = (l1[i] - m1) + (l2[i] - m2);
    min_gap_sum = std::min(min_gap_sum, gap_sum);
    if (l1[i] <= m1 + tol && l2[i] <= m2 + tol) disjoint = false;
  }
  StrongResult r;
  r.drift = disjoint;
  r.constant = disjoint ? min_gap_sum / 3.0 : 0.0;
  return r;
}

WeakResult check_weak_H(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                        const TimeWindow& w_from, const TimeWindow& w_to, double tol) {
  const auto d_from = mean_distribution(process, w_from);
  const auto d_to = mean_distribution(process, w_to);
  const auto lf = all_losses(H, d_from, loss);
  const auto lt = all_losses(H, d_to, loss);
  const double mf = min_of(lf);
  const double mt = min_of(lt);
  WeakResult r;
  double best_excess = tol;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (lf[i] > mf + tol) continue;  // not a w_from-minimizer
    const double excess = lt[i] - mt;
    if (excess > best_excess) {
      best_excess = excess;
      r.witness = i;
      r.drift = true;
    }
  }
  return r;
}

EllResult check_ell(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                    const TimeWindow& w_from, const TimeWindow& w_to, double tol) {
  const auto d_from = mean_distribution(process, w_from);
  const auto d_to = mean_distribution(process, w_to);
  const auto lf = all_losses(H, d_from, loss);
  const auto lt = all_losses(H, d_to, loss);
  const double mf = min_of(lf);
  EllResult r;
  for (std::size_t i = 0; i < H.size(); ++i) {
    if (lf[i] > mf + tol) continue;
    const double increase = lt[i] - lf[i];
    if (increase > tol && increase > r.constant) {
      r.constant = increase;
      r.witness = i;
      r.drift = true;
    }
  }
  return r;
}

std::string relation_name(LossRelation r) {
  switch (r) {
    case LossRelation::Increasing: return "increasing";
    case LossRelation::Decreasing: return "decreasing";
    case LossRelation::Constant: return "constant";
  }
  return "?";
}

LossRelation optimal_loss_relation(const DriftProcess& process, const FiniteHypothesisClass& H,
                                   Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                                   double tol) {
  const double m1 = min_of(all_losses(H, mean_distribution(process, w1), loss));
  const double m2 = min_of(all_losses(H, mean_distribution(process, w2), loss));
  if (m2 > m1 + tol) return LossRelation::Increasing;
  if (m1 > m2 + tol) return LossRelation::Decreasing;
  return LossRelation::Constant;
}

double discrepancy(const DriftProcess& process, const FiniteHypothesisClass& H, Loss loss,
                   const TimeWindow& w1, const TimeWindow& w2) {
  const auto d1 = mean_distribution(process, w1);
  const auto d2 = mean_distribution(process, w2);
  double sup = 0.0;
  for (const Hypothesis& h : H.hypotheses)
    sup = std::max(sup, std::abs(expected_loss(h, d1, loss) - expected_loss(h, d2, loss)));
  return sup;
}

bool loss_uniqueness_holds(const FiniteHypothesisClass& H, const FiniteDistribution& d, Loss loss,
                           double tol, std::span<const Instance> domain) {
  std::vector<Instance> local;
  if (domain.empty()) {
    local = d.support();
    domain = local;
  }
  const auto near = argmin_set(H, d, loss, tol);
  for (std::size_t a = 0; a < near.size(); ++a) {
    for (std::size_t b = a + 1; b < near.size(); ++b) {
      const Hypothesis& ha = H.hypotheses[near[a]];
      const Hypothesis& hb = H.hypotheses[near[b]];
      for (const Instance& x : domain) {
        const double pa = predict(ha, x);
        const double pb = predict(hb, x);
        for (Label y : {0, 1}) {
          if (std::abs(point_loss(pa, y, loss) - point_loss(pb, y, loss)) > tol) return false;
        }
      }
    }
  }
  return true;
}

bool has_real_drift(const DriftProcess& process, const TimeWindow& w1, const TimeWindow& w2,
                    double tol) {
  const auto d1 = mean_distribution(process, w1);
  const auto d2 = mean_distribution(process, w2);
  for (const Instance& x : d1.support()) {
    const auto p1 = d1.posterior_at(x);
    const auto p2 = d2.posterior_at(x);
    if (p1.mass <= 0.0 || p2.mass <= 0.0) continue;  // posterior only comparable on shared support
    if (std::abs(p1.p1 - p2.p1) > tol) return true;
  }
  return false;
}

StrongResult check_strong_H_universal_mse(const DriftProcess& process, const TimeWindow& w1,
                                          const TimeWindow& w2, double tol) {
  const auto d1 = mean_distribution(process, w1);
  const auto d2 = mean_distribution(process, w2);
  double inf_gap_sum = 0.0;
  for (const Instance& x : process.domain()) {
    const auto p1 = d1.posterior_at(x);
    const auto p2 = d2.posterior_at(x);
    if (p1.mass <= 0.0 || p2.mass <= 0.0) continue;
    const double delta = p1.p1 - p2.p1;
    // weighted two-point variance: min over a common table value
    inf_gap_sum += p1.mass * p2.mass / (p1.mass + p2.mass) * delta * delta;
  }
  StrongResult r;
  r.constant = inf_gap_sum / 3.0;
  r.drift = inf_gap_sum > tol;
  return r;
}

CountsLearner erm_learner(const FiniteHypothesisClass& H, Loss loss, bool lowest_index) {
  return [H, loss, lowest_index](const FiniteDistribution& d,
                                 const std::vector<std::int64_t>& counts) -> Hypothesis {
    if (counts.size() != d.size()) throw std::invalid_argument("counts/distribution mismatch");
    std::int64_t n = 0;
    for (auto c : counts) n += c;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < H.size(); ++i) {
      const std::size_t idx = lowest_index ? i : H.size() - 1 - i;
      double acc = 0.0;
      for (std::size_t a = 0; a < counts.size(); ++a) {
        if (counts[a] == 0) continue;
        const Atom& at = d.atoms()[a];
        acc += static_cast<double>(counts[a]) *
               point_loss(predict(H.hypotheses[idx], at.x), at.y, loss);
      }
      acc /= static_cast<double>(n);
      if (acc < best - 1e-12) {
        best = acc;
        best_i = idx;
      }
    }
    return H.hypotheses[best_i];
  };
}

double erm_misselection_bound(const FiniteHypothesisClass& H, const FiniteDistribution& d,
                              Loss loss, std::size_t n, double tol) {
  const auto losses = all_losses(H, d, loss);
  const double lo = min_of(losses);
  std::vector<std::size_t> optimal;
  for (std::size_t i = 0; i < H.size(); ++i)
    if (losses[i] <= lo + tol) optimal.push_back(i);
  double total = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    const double gap = losses[i] - lo;
    if (gap <= tol) continue;
    // Selecting h requires beating every optimum empirically; bound against
    // the optimum with the least per-point loss-difference variance.
    double best = 1.0;
    for (std::size_t j : optimal) {
      double second_moment = 0.0;
      for (const Atom& a : d.atoms()) {
        const double diff = point_loss(predict(H.hypotheses[i], a.x), a.y, loss) -
                            point_loss(predict(H.hypotheses[j], a.x), a.y, loss);
        second_moment += a.weight * diff * diff;
      }
      const double var = std::max(second_moment - gap * gap, 0.0);
      const double exponent =
          static_cast<double>(n) * gap * gap / (2.0 * (var + gap / 3.0));
      best = std::min(best, std::exp(-exponent));
    }
    total += best;
  }
  return std::min(total, 1.0);
}

McResult check_A_drift_mc(const DriftProcess& process, const CountsLearner& learner, Loss loss,
                          const TimeWindow& w1, const TimeWindow& w2, std::size_t n1,
                          std::size_t n2, double C, std::size_t trials, std::uint64_t seed) {
  if (n1 == 0 || n2 == 0 || trials == 0)
    throw std::invalid_argument("A-drift MC needs n1, n2, trials >= 1");
  const auto d1 = mean_distribution(process, w1);
  const auto d2 = mean_distribution(process, w2);
  McResult r;
  for (std::size_t t = 0; t < trials; ++t) {
    Rng rng(Rng::derive({seed, 0x41647269ULL, t}));
    const auto c1 = draw_counts(d1, n1, rng);
    const auto c2 = draw_counts(d2, n2, rng);
    try {
      const Hypothesis h1 = learner(d1, c1);
      const Hypothesis h2 = learner(d2, c2);
      if (expected_loss(h1, d2, loss) > expected_loss(h2, d2, loss) + C) ++r.fires;
      ++r.trials;
    } catch (const std::exception&) {
      ++r.errors;
    }
  }
  r.estimate = r.trials ? static_cast<double>(r.fires) / static_cast<double>(r.trials) : 0.0;
  return r;
}

DriftReport compute_drift_report(const DriftProcess& process, const FiniteHypothesisClass& H,
                                 Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                                 double tol) {
  DriftReport rep;
  rep.strong = check_strong_H(process, H, loss, w1, w2, tol);
  rep.weak_12 = check_weak_H(process, H, loss, w1, w2, tol);
  rep.weak_21 = check_weak_H(process, H, loss, w2, w1, tol);
  rep.ell_12 = check_ell(process, H, loss, w1, w2, tol);
  rep.ell_21 = check_ell(process, H, loss, w2, w1, tol);
  rep.relation = optimal_loss_relation(process, H, loss, w1, w2, tol);
  rep.discrepancy = driftlab::discrepancy(process, H, loss, w1, w2);
  rep.min_loss_1 = min_of(all_losses(H, mean_distribution(process, w1), loss));
  rep.min_loss_2 = min_of(all_losses(H, mean_distribution(process, w2), loss));
  return rep;
}

bool Figure2Result::violation() const {
  for (const ArrowCheck& a : arrows)
    if (a.status == ArrowStatus::Fail) return true;
  return false;
}

Figure2Result verify_figure2(const DriftProcess& process, const FiniteHypothesisClass& H,
                             Loss loss, const TimeWindow& w1, const TimeWindow& w2,
                             const Figure2Params& params) {
  const double tol = params.tol;
  Figure2Result out;
  out.report = compute_drift_report(process, H, loss, w1, w2, tol);
  const DriftReport& rep = out.report;

  const auto domain = process.domain();
  out.uniqueness_1 = loss_uniqueness_holds(H, mean_distribution(process, w1), loss, tol, domain);
  out.uniqueness_2 = loss_uniqueness_holds(H, mean_distribution(process, w2), loss, tol, domain);

  auto push = [&](const std::string& name, bool applicable, bool holds,
                  const std::string& detail = "") {
    ArrowCheck c;
    c.arrow = name;
    c.status = !applicable ? ArrowStatus::NotApplicable
                           : (holds ? ArrowStatus::Pass : ArrowStatus::Fail);
    c.detail = detail;
    out.arrows.push_back(std::move(c));
  };

  const bool weak_any = rep.weak_12.drift || rep.weak_21.drift;
  const bool ell_any = rep.ell_12.drift || rep.ell_21.drift;

  // strong => weak, both directions, no side condition.
  push("strong->weak", rep.strong.drift, rep.weak_12.drift && rep.weak_21.drift);

  // weak + loss uniqueness on both windows => strong.
  push("weak+uniq->strong", weak_any && out.uniqueness_1 && out.uniqueness_2, rep.strong.drift);

  // non-decreasing optimal loss: weak => ell (per direction of the increase).
  const bool nondecr = rep.relation != LossRelation::Decreasing;
  const bool nonincr = rep.relation != LossRelation::Increasing;
  push("nondecr+weak->ell", nondecr && rep.weak_12.drift, rep.ell_12.drift);
  push("nondecr+weak->ell(rev)", nonincr && rep.weak_21.drift, rep.ell_21.drift);

  // non-increasing optimal loss: ell => weak.
  push("nonincr+ell->weak", nonincr && rep.ell_12.drift, rep.weak_12.drift);
  push("nonincr+ell->weak(rev)", nondecr && rep.ell_21.drift, rep.weak_21.drift);

  // any model drift implies distribution drift between the windows, and so
  // does a change of the posterior.
  const double tv =
      total_variation(mean_distribution(process, w1), mean_distribution(process, w2));
  push("model-drift->drift", rep.strong.drift || weak_any || ell_any, tv > tol,
       "tv=" + std::to_string(tv));
  push("real->drift", has_real_drift(process, w1, w2, tol), tv > tol);

  // Risk-decomposition bound: for every h, L2 <= L1 + discrepancy.
  bool bound_ok = true;
  {
    const auto d1 = mean_distribution(process, w1);
    const auto d2 = mean_distribution(process, w2);
    for (const Hypothesis& h : H.hypotheses) {
      const double l1 = expected_loss(h, d1, loss);
      const double l2 = expected_loss(h, d2, loss);
      if (l2 > l1 + rep.discrepancy + tol) bound_ok = false;
    }
  }
  push("risk-bound", true, bound_ok);

  if (params.run_mc) {
    CountsLearner learner = params.learner;
    if (!learner) learner = erm_learner(H, loss, true);
    // Oracle-predicted margin: C_s/2 under strong drift, else the theorem's
    // C_ell/2 when an optimal model's loss moves, else the declared default.
    double C = params.mc.default_C;
    if (rep.strong.drift)
      C = rep.strong.constant / 2.0;
    else if (rep.ell_12.drift)
      C = rep.ell_12.constant / 2.0;
    out.mc_C = C;
    const McResult mc = check_A_drift_mc(process, learner, loss, w1, w2, params.mc.n1,
                                         params.mc.n2, C, params.mc.trials, params.mc.seed);
    out.mc_A = mc.estimate;

    // Companion estimate for the ITTE theorem: the trained model's own loss
    // increase, P[L_{W2}(A(S1)) > L_{W1}(A(S1)) + C], on shared draws.
    {
      const auto d1 = mean_distribution(process, w1);
      const auto d2 = mean_distribution(process, w2);
      std::size_t fires = 0, total = 0;
      for (std::size_t t = 0; t < params.mc.trials; ++t) {
        Rng rng(Rng::derive({params.mc.seed, 0x41647269ULL, t}));
        const auto c1 = draw_counts(d1, params.mc.n1, rng);
        (void)draw_counts(d2, params.mc.n2, rng);  // keep draws aligned with check_A_drift_mc
        try {
          const Hypothesis h1 = learner(d1, c1);
          if (expected_loss(h1, d2, loss) > expected_loss(h1, d1, loss) + C) ++fires;
          ++total;
        } catch (const std::exception&) {
        }
      }
      out.mc_ell_star = total ? static_cast<double>(fires) / static_cast<double>(total) : 0.0;
    }

    const bool mc_hi = out.mc_A >= params.mc.hi;
    const bool mc_lo = out.mc_A <= params.mc.lo;

    // The drift definitions quantify over sample sizes; the positive sampled
    // arrows are conclusive only when the pinned n is certified sufficient
    // for exact empirical risk minimization in both windows.
    {
      const auto d1 = mean_distribution(process, w1);
      const auto d2 = mean_distribution(process, w2);
      out.mc_certified =
          erm_misselection_bound(H, d1, loss, params.mc.n1, tol) <= params.mc.certify_bound &&
          erm_misselection_bound(H, d2, loss, params.mc.n2, tol) <= params.mc.certify_bound;
    }

    if (params.learner_consistent) {
      push("strong->A", rep.strong.drift && out.mc_certified, mc_hi,
           "estimate=" + std::to_string(out.mc_A));
      push("A->weak", mc_hi, rep.weak_12.drift, "estimate=" + std::to_string(out.mc_A));
      // Constant optimal loss: A-model drift iff the trained model's own loss
      // rises (the ITTE theorem), decided at the same thresholds.
      const bool star_hi = out.mc_ell_star >= params.mc.hi;
      const bool star_lo = out.mc_ell_star <= params.mc.lo;
      push("const:A<->ell*", rep.relation == LossRelation::Constant && out.mc_certified,
           (mc_hi && star_hi) || (mc_lo && star_lo) || (!mc_hi && !mc_lo && !star_hi && !star_lo),
           "A=" + std::to_string(out.mc_A) + " ell*=" + std::to_string(out.mc_ell_star));
    } else {
      push("strong->A", false, true, "learner declared inconsistent");
      push("A->weak", false, true, "learner declared inconsistent");
      push("const:A<->ell*", false, true, "learner declared inconsistent");
    }
  }
  return out;
}

RandomInstance make_random_instance(std::uint64_t seed) {
  Rng rng(seed);
  // Support: 2..6 distinct coordinates from a half-integer lattice.
  const int m = rng.uniform_int(2, 6);
  std::vector<double> coords;
  {
    std::vector<double> lattice;
    for (int i = -4; i <= 4; ++i) lattice.push_back(0.5 * i);
    for (int i = 0; i < m; ++i) {
      const auto j = rng.below(lattice.size());
      coords.push_back(lattice[j]);
      lattice.erase(lattice.begin() + static_cast<long>(j));
    }
    std::sort(coords.begin(), coords.end());
  }

  // 2..4 timepoints, each distribution = 24 balls of mass 1/24. Half the
  // instances use noisy posteriors (balls over (coord, label) cells), half
  // use crisp ones (balls over coords, one label per coordinate and time),
  // which mirrors the shape of the worked counterexamples.
  const int k = rng.uniform_int(2, 4);
  const bool noisy_labels = rng.bernoulli(0.5);
  std::vector<FiniteDistribution> dists;
  for (int t = 0; t < k; ++t) {
    std::vector<Atom> atoms;
    if (noisy_labels) {
      std::vector<std::int64_t> balls(static_cast<std::size_t>(m) * 2, 0);
      for (int b = 0; b < 24; ++b) ++balls[rng.below(balls.size())];
      for (int i = 0; i < m; ++i) {
        for (Label y : {0, 1}) {
          const auto c = balls[static_cast<std::size_t>(i) * 2 + static_cast<std::size_t>(y)];
          if (c > 0) atoms.push_back(Atom{static_cast<double>(c) / 24.0, num1(coords[i]), y});
        }
      }
    } else {
      std::vector<std::int64_t> balls(static_cast<std::size_t>(m), 0);
      for (int b = 0; b < 24; ++b) ++balls[rng.below(balls.size())];
      for (int i = 0; i < m; ++i) {
        const Label y = rng.uniform_int(0, 1);
        if (balls[static_cast<std::size_t>(i)] > 0)
          atoms.push_back(Atom{static_cast<double>(balls[static_cast<std::size_t>(i)]) / 24.0,
                               num1(coords[i]), y});
      }
    }
    if (atoms.empty()) atoms.push_back(Atom{1.0, num1(coords[0]), 0});
    dists.push_back(FiniteDistribution(std::move(atoms)));
  }
  DriftProcess process = uniform_process(std::move(dists));

  // Hypotheses: the full threshold grid plus constants and a couple of
  // random set indicators, truncated to at most 12.
  std::vector<Hypothesis> hs;
  for (auto& h : threshold_grid(coords).hypotheses) hs.push_back(h);
  hs.push_back(ConstantHyp{0.0});
  hs.push_back(ConstantHyp{1.0});
  const int extra = rng.uniform_int(0, 2);
  for (int e = 0; e < extra; ++e) {
    SetIndicatorHyp s;
    for (double c : coords)
      if (rng.bernoulli(0.5)) s.members.push_back(num1(c));
    if (!s.members.empty()) hs.push_back(std::move(s));
  }
  while (hs.size() > 12) hs.erase(hs.begin() + static_cast<long>(rng.below(hs.size())));

  // Two random nonempty windows (may overlap; must differ as sets).
  auto pick_window = [&]() {
    TimeWindow w;
    while (w.indices.empty()) {
      w.indices.clear();
      for (int t = 0; t < k; ++t)
        if (rng.bernoulli(0.5)) w.indices.push_back(static_cast<std::size_t>(t));
    }
    return w;
  };
  TimeWindow w1 = pick_window();
  TimeWindow w2 = pick_window();
  while (w2.indices == w1.indices) w2 = pick_window();

  return RandomInstance{std::move(process), FiniteHypothesisClass(std::move(hs)), std::move(w1),
                        std::move(w2)};
}

}  // namespace driftlab
