#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "driftlab/core.hpp"
#include "driftlab/oracle.hpp"

using namespace driftlab;

namespace {

PredictFn as_fn(const Hypothesis& h) {
  return [h](const Instance& x) { return predict(h, x); };
}

}  // namespace

TEST_CASE("mean distribution: identity, symmetric and weighted mixtures") {
  const auto d0 = dirac(num1(0), 0);
  const auto d1 = dirac(num1(1), 1);

  {
    const DriftProcess p({{1.0, d0}});
    const auto m = mean_distribution(p, TimeWindow::single(0));
    REQUIRE(m.size() == 1);
    CHECK(m.atoms()[0].weight == doctest::Approx(1.0));
    CHECK(m.atoms()[0].x == num1(0));
  }
  {
    const auto p = uniform_process({d0, d1});
    const auto m = mean_distribution(p, TimeWindow{{0, 1}});
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0].weight == doctest::Approx(0.5));
    CHECK(m.atoms()[1].weight == doctest::Approx(0.5));
  }
  {
    // Hand-computed weighted mixture: p = (1/4, 3/4) over diracs.
    const DriftProcess p({{0.25, d0}, {0.75, d1}});
    const auto m = mean_distribution(p, TimeWindow{{0, 1}});
    REQUIRE(m.size() == 2);
    CHECK(m.atoms()[0].weight == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(m.atoms()[0].y == 0);
    CHECK(m.atoms()[1].weight == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(m.atoms()[1].y == 1);
  }
}

TEST_CASE("mean distribution rejects out-of-range windows") {
  const DriftProcess p({{1.0, dirac(num1(0), 0)}});
  CHECK_THROWS_AS(mean_distribution(p, TimeWindow{{3}}), std::invalid_argument);
  CHECK_THROWS_AS(mean_distribution(p, TimeWindow{{}}), std::invalid_argument);
}

TEST_CASE("expected loss: perfect predictor, appendix cross-loss, constant on a coin") {
  const auto perfect = uniform_mix({{0, 0}, {1, 1}});
  CHECK(expected_loss(as_fn(ThresholdHyp{0, 0.5, true}), perfect, Loss::ZeroOne) == 0.0);

  // Second-window distribution of the strong-drift counterexample: a
  // first-window optimum 1[x > theta], theta in [0,1), has loss 1/3.
  const auto d2 = uniform_mix({{-1, 0}, {0, 1}, {1, 1}});
  CHECK(expected_loss(as_fn(ThresholdHyp{0, 0.0, true}), d2, Loss::ZeroOne) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(expected_loss(as_fn(ThresholdHyp{0, 0.5, true}), d2, Loss::ZeroOne) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const FiniteDistribution coin({{0.5, num1(7), 0}, {0.5, num1(7), 1}});
  CHECK(expected_loss(as_fn(ConstantHyp{0.0}), coin, Loss::ZeroOne) == doctest::Approx(0.5));
}

TEST_CASE("empirical loss basics and the empty-sample error") {
  Sample s;
  s.points.assign(5, LabeledPoint{num1(2), 1});
  CHECK(empirical_loss(as_fn(ConstantHyp{1.0}), s, Loss::ZeroOne) == 0.0);

  Sample mixed;
  mixed.points = {{num1(0), 0}, {num1(0), 1}};
  CHECK(empirical_loss(as_fn(ConstantHyp{0.0}), mixed, Loss::ZeroOne) == doctest::Approx(0.5));

  Sample empty;
  CHECK_THROWS_AS(empirical_loss(as_fn(ConstantHyp{0.0}), empty, Loss::ZeroOne),
                  std::invalid_argument);
}

TEST_CASE("empirical loss concentrates on the expected loss (LLN at n=1e5)") {
  const auto d2 = uniform_mix({{-1, 0}, {0, 1}, {1, 1}});
  const auto s = draw_sample(d2, 100000, 20240811);
  const double emp = empirical_loss(as_fn(ThresholdHyp{0, 0.0, true}), s, Loss::ZeroOne);
  CHECK(emp == doctest::Approx(1.0 / 3.0).epsilon(0.03));
  CHECK(std::abs(emp - 1.0 / 3.0) < 0.01);
}

TEST_CASE("draw_sample: single atom, frequencies, determinism") {
  const auto single = dirac(num1(4), 1);
  const auto s1 = draw_sample(single, 50, 3);
  REQUIRE(s1.size() == 50);
  for (const auto& p : s1.points) {
    CHECK(p.x == num1(4));
    CHECK(p.y == 1);
  }

  const FiniteDistribution two({{0.5, num1(0), 0}, {0.5, num1(1), 1}});
  const auto big = draw_sample(two, 100000, 99);
  double ones = 0;
  for (const auto& p : big.points) ones += p.y;
  CHECK(ones / 100000.0 == doctest::Approx(0.5).epsilon(0.02));
  CHECK(std::abs(ones / 100000.0 - 0.5) < 0.01);

  const auto a = draw_sample(two, 1000, 1234);
  const auto b = draw_sample(two, 1000, 1234);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.points[i].x == b.points[i].x);
    CHECK(a.points[i].y == b.points[i].y);
  }
}

TEST_CASE("distribution drift detection is representation independent") {
  const auto d = uniform_mix({{0, 0}, {1, 1}});
  CHECK_FALSE(has_distribution_drift(uniform_process({d, d, d})));

  const auto ce2 = uniform_process({uniform_mix({{-1, 0}, {0, 0}, {1, 1}}),
                                    uniform_mix({{-1, 0}, {0, 1}, {1, 1}})});
  CHECK(has_distribution_drift(ce2));

  // Same distribution listed in different atom order, some atoms split.
  const FiniteDistribution left({{0.25, num1(1), 1}, {0.5, num1(0), 0}, {0.25, num1(1), 1}});
  const FiniteDistribution right({{0.5, num1(1), 1}, {0.5, num1(0), 0}});
  CHECK(total_variation(left, right) == doctest::Approx(0.0));
  CHECK_FALSE(has_distribution_drift(uniform_process({left, right})));
}

TEST_CASE("expected loss is affine in the distribution") {
  Rng rng(7);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Atom> a1, a2;
    const int n = rng.uniform_int(1, 4);
    for (int i = 0; i < n; ++i) {
      a1.push_back(Atom{1.0 / n, num1(rng.uniform_int(-3, 3)), rng.uniform_int(0, 1)});
      a2.push_back(Atom{1.0 / n, num1(rng.uniform_int(-3, 3)), rng.uniform_int(0, 1)});
    }
    const FiniteDistribution d1(a1), d2(a2);
    const double alpha = rng.uniform();
    const auto m = mix(d1, d2, alpha);
    const Hypothesis h = ThresholdHyp{0, rng.uniform(-3, 3), true};
    const double lhs = expected_loss(h, m, Loss::ZeroOne);
    const double rhs = alpha * expected_loss(h, d1, Loss::ZeroOne) +
                       (1 - alpha) * expected_loss(h, d2, Loss::ZeroOne);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}

TEST_CASE("tower property: window loss is the conditional mean of timepoint losses") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const auto inst = make_random_instance(rng.next_u64());
    const Hypothesis h = ThresholdHyp{0, rng.uniform(-2, 2), true};
    const auto& w = inst.w1;
    double mass = 0.0, acc = 0.0;
    for (std::size_t t : w.indices) {
      mass += inst.process.timepoints()[t].p;
      acc += inst.process.timepoints()[t].p *
             expected_loss(h, inst.process.timepoints()[t].dist, Loss::ZeroOne);
    }
    const double via_mean =
        expected_loss(h, mean_distribution(inst.process, w), Loss::ZeroOne);
    CHECK(via_mean == doctest::Approx(acc / mass).epsilon(1e-12));
  }
}

TEST_CASE("mean_distribution on a singleton window merges to the member distribution") {
  const FiniteDistribution split({{0.25, num1(2), 1}, {0.25, num1(2), 1}, {0.5, num1(0), 0}});
  const DriftProcess p({{1.0, split}});
  const auto m = mean_distribution(p, TimeWindow::single(0));
  CHECK(total_variation(m, split) == doctest::Approx(0.0));
  REQUIRE(m.size() == 2);  // merged
}

TEST_CASE("empirical loss converges in median as n grows") {
  const auto d = uniform_mix({{-1, 0}, {0, 1}, {1, 1}});
  const Hypothesis h = ThresholdHyp{0, 0.0, true};
  const double truth = expected_loss(h, d, Loss::ZeroOne);
  std::vector<double> med;
  for (std::size_t n : {100ul, 1000ul, 10000ul}) {
    std::vector<double> errs;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
      const auto s = draw_sample(d, n, Rng::derive({555, n, seed}));
      errs.push_back(std::abs(empirical_loss(as_fn(h), s, Loss::ZeroOne) - truth));
    }
    std::sort(errs.begin(), errs.end());
    med.push_back(errs[25]);
  }
  CHECK(med[1] < med[0]);
  CHECK(med[2] < med[1]);
}

TEST_CASE("process text format round-trips") {
  const auto p = uniform_process({uniform_mix({{-1, 0}, {0, 0}, {1, 1}}),
                                  uniform_mix({{-1, 0}, {0, 1}, {1, 1}})});
  const std::string text = format_process(p);
  const auto q = parse_process(text);
  REQUIRE(q.size() == p.size());
  for (std::size_t t = 0; t < p.size(); ++t) {
    CHECK(q.timepoints()[t].p == doctest::Approx(p.timepoints()[t].p));
    CHECK(total_variation(q.timepoints()[t].dist, p.timepoints()[t].dist) ==
          doctest::Approx(0.0));
  }
  CHECK_THROWS(parse_process("t=0 p_t=1 w=1 x=bogus y=9"));
  CHECK_THROWS(parse_process(""));
}

TEST_CASE("distribution invariants are enforced") {
  CHECK_THROWS_AS(FiniteDistribution({{0.5, num1(0), 0}}), std::invalid_argument);  // sum != 1
  CHECK_THROWS_AS(FiniteDistribution({{1.0, num1(0), 2}}), std::invalid_argument);  // label
  CHECK_THROWS_AS(FiniteDistribution({{1.0, Instance{{std::nan("")}, {}}, 0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(DriftProcess({{0.0, dirac(num1(0), 0)}, {1.0, dirac(num1(0), 0)}}),
                  std::invalid_argument);  // zero-mass timepoint
}
