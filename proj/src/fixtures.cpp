#include "driftlab/fixtures.hpp"

#include <cmath>
#include <sstream>

namespace driftlab {

std::vector<FixtureId> all_fixture_ids() {
  return {FixtureId::CE1, FixtureId::CE2, FixtureId::CE3, FixtureId::CE4,
          FixtureId::ELL1, FixtureId::ELL2, FixtureId::XOR};
}

std::string fixture_name(FixtureId id) {
  switch (id) {
    case FixtureId::CE1: return "CE1";
    case FixtureId::CE2: return "CE2";
    case FixtureId::CE3: return "CE3";
    case FixtureId::CE4: return "CE4";
    case FixtureId::ELL1: return "ELL1";
    case FixtureId::ELL2: return "ELL2";
    case FixtureId::XOR: return "XOR";
  }
  return "?";
}

FixtureId parse_fixture(const std::string& name) {
  for (FixtureId id : all_fixture_ids())
    if (fixture_name(id) == name) return id;
  throw std::invalid_argument("unknown fixture id: " + name);
}

namespace {

const double k13 = 1.0 / 3.0;

Fixture base_fixture(FixtureId id, std::string name, std::string note, DriftProcess process,
                     FiniteHypothesisClass cls) {
  return Fixture{id,
                 std::move(name),
                 std::move(process),
                 std::move(cls),
                 Loss::ZeroOne,
                 TimeWindow::single(0),
                 TimeWindow::single(1),
                 ExpectedReport{},
                 std::move(note)};
}

Fixture make_ce1() {
    // 1[x >= 2] realized as 1[x > 1.5] on the support {1,2,3}.
  Fixture f = base_fixture(FixtureId::CE1, "CE1", "weak drift without strong drift; membership hypothesis corrected to 1[x=2]",
      uniform_process({
      uniform_mix({{1, 0}, {2, 1}}),
      uniform_mix({{1, 0}, {2, 1}, {3, 1}}),
  }),
      FiniteHypothesisClass(
      {ThresholdHyp{0, 1.5, true}, SetIndicatorHyp{{num1(2.0)}}}));
  f.expected.strong = false;
  f.expected.weak_12 = true;
  f.expected.weak_21 = false;
  f.expected.ell_12 = true;
  f.expected.ell_12_C = k13;
  f.expected.ell_21 = false;
  f.expected.relation = LossRelation::Constant;
  f.expected.discrepancy = k13;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = 0.0;
  return f;
}

Fixture make_ce2() {
    Fixture f = base_fixture(FixtureId::CE2, "CE2", "strong drift; the constant learner shows no A-drift for inconsistent A",
      uniform_process({
      uniform_mix({{-1, 0}, {0, 0}, {1, 1}}),
      uniform_mix({{-1, 0}, {0, 1}, {1, 1}}),
  }),
      FiniteHypothesisClass({ThresholdHyp{0, -1.0, true}, ThresholdHyp{0, -0.5, true},
                                 ThresholdHyp{0, 0.0, true}, ThresholdHyp{0, 0.5, true}}));
  f.expected.strong = true;
  f.expected.strong_C = 1.0 / 9.0;
  f.expected.weak_12 = true;
  f.expected.weak_21 = true;
  f.expected.ell_12 = true;
  f.expected.ell_12_C = k13;
  f.expected.ell_21 = true;
  f.expected.ell_21_C = k13;
  f.expected.relation = LossRelation::Constant;
  f.expected.discrepancy = k13;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = 0.0;
  return f;
}

Fixture make_ce3() {
    Fixture f = base_fixture(FixtureId::CE3, "CE3", "A-drift without weak drift for an inconsistent learner (cases swapped)",
      uniform_process({
      uniform_mix({{-1, 0}, {0, 1}}),
      uniform_mix({{-1, 0}, {0, 1}, {1, 1}}),
  }),
      FiniteHypothesisClass({ThresholdHyp{0, -2.0, true}, ThresholdHyp{0, -0.5, true},
                                 ThresholdHyp{0, 0.5, true}, ThresholdHyp{0, 2.0, true}}));
  f.expected.strong = false;
  f.expected.weak_12 = false;
  f.expected.weak_21 = false;
  f.expected.ell_12 = false;
  f.expected.ell_21 = false;
  f.expected.relation = LossRelation::Constant;
  f.expected.discrepancy = 1.0 / 6.0;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = 0.0;
  return f;
}

Fixture make_ce4() {
    Fixture f = base_fixture(FixtureId::CE4, "CE4", "label switch: real drift with strong drift and a loss jump",
      uniform_process({
      uniform_mix({{0, 0}, {1, 1}}),
      uniform_mix({{0, 1}, {1, 0}}),
  }),
      FiniteHypothesisClass(
      {ThresholdHyp{0, -1.0, true}, ThresholdHyp{0, 0.5, true}, ThresholdHyp{0, 2.0, true}}));
  f.expected.strong = true;
  f.expected.strong_C = 1.0 / 6.0;
  f.expected.weak_12 = true;
  f.expected.weak_21 = true;
  f.expected.ell_12 = true;
  f.expected.ell_12_C = 1.0;
  f.expected.ell_21 = false;
  f.expected.relation = LossRelation::Increasing;
  f.expected.discrepancy = 1.0;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = 0.5;
  return f;
}

Fixture make_ell1() {
    const auto clean = uniform_mix({{0, 0}, {1, 1}});
  const auto flipped = uniform_mix({{0, 1}, {1, 0}});
  Fixture f = base_fixture(FixtureId::ELL1, "ELL1", "loss jump by label noise; the optimal model does not move",
      uniform_process({clean, mix(clean, flipped, 2.0 / 3.0)}),
      FiniteHypothesisClass(
      {ThresholdHyp{0, -1.0, true}, ThresholdHyp{0, 0.5, true}, ThresholdHyp{0, 2.0, true}}));
  f.expected.strong = false;
  f.expected.weak_12 = false;
  f.expected.weak_21 = false;
  f.expected.ell_12 = true;
  f.expected.ell_12_C = k13;
  f.expected.ell_21 = false;
  f.expected.relation = LossRelation::Increasing;
  f.expected.discrepancy = k13;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = k13;
  return f;
}

Fixture make_ell2() {
    Fixture f = base_fixture(FixtureId::ELL2, "ELL2", "weak drift without a loss jump; printed constant 1/2 recomputes to 1/4",
      uniform_process({
      uniform_mix({{-1, 0}, {0, 0}, {0, 1}, {1, 1}}),
      uniform_mix({{-1, 0}, {0, 0}, {0.5, 1}, {1, 1}}),
  }),
      FiniteHypothesisClass({ThresholdHyp{0, -2.0, true}, ThresholdHyp{0, -0.5, true},
                                 ThresholdHyp{0, 0.25, true}, ThresholdHyp{0, 0.75, true},
                                 ThresholdHyp{0, 1.5, true}}));
  f.expected.strong = false;
  f.expected.weak_12 = true;
  f.expected.weak_21 = false;
  f.expected.ell_12 = false;
  f.expected.ell_21 = true;
  f.expected.ell_21_C = 0.25;
  f.expected.relation = LossRelation::Decreasing;
  f.expected.discrepancy = 0.25;
  f.expected.min_loss_1 = 0.25;
  f.expected.min_loss_2 = 0.0;
  return f;
}

Fixture make_xor() {
  // Dense grid stand-in for the two uniform half squares. The label is
  // 1[x1*x2 > 0]; grid cells are offset so no coordinate hits zero.
  auto half = [](double x1_lo) {
    std::vector<Atom> atoms;
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 20; ++j) {
        const double x1 = x1_lo + 0.05 + 0.1 * i;
        const double x2 = -0.95 + 0.1 * j;
        atoms.push_back(Atom{1.0 / 200.0, num2(x1, x2), x1 * x2 > 0 ? 1 : 0});
      }
    }
    return FiniteDistribution(std::move(atoms));
  };
  std::vector<Hypothesis> hs;
  const double pi = std::acos(-1.0);
  for (int a = 0; a < 16; ++a) {
    const double ang = 2.0 * pi * a / 16.0;
    for (int b = -6; b <= 6; ++b)
      hs.push_back(LinearHyp{{std::cos(ang), std::sin(ang)}, 0.2 * b});
  }
  Fixture f = base_fixture(FixtureId::XOR, "XOR",
                           "virtual drift forces linear models to flip; no real drift",
                           uniform_process({half(-1.0), half(0.0)}),
                           FiniteHypothesisClass(std::move(hs)));
  f.expected.strong = true;
  f.expected.strong_C = 0.15;  // band: enumeration-derived, checked as >=
  f.expected.exact_strong_C = false;
  f.expected.weak_12 = true;
  f.expected.weak_21 = true;
  f.expected.ell_12 = true;
  f.expected.ell_12_C = 1.0;
  f.expected.ell_21 = true;
  f.expected.ell_21_C = 1.0;
  f.expected.relation = LossRelation::Constant;
  f.expected.discrepancy = 1.0;
  f.expected.min_loss_1 = 0.0;
  f.expected.min_loss_2 = 0.0;
  return f;
}

}  // namespace

Fixture make_fixture(FixtureId id) {
  switch (id) {
    case FixtureId::CE1: return make_ce1();
    case FixtureId::CE2: return make_ce2();
    case FixtureId::CE3: return make_ce3();
    case FixtureId::CE4: return make_ce4();
    case FixtureId::ELL1: return make_ell1();
    case FixtureId::ELL2: return make_ell2();
    case FixtureId::XOR: return make_xor();
  }
  throw std::invalid_argument("unknown fixture id");
}

std::vector<std::string> fixture_mismatches(const Fixture& f, double tol) {
  std::vector<std::string> out;
  const DriftReport rep = compute_drift_report(f.process, f.cls, f.loss, f.w1, f.w2, tol);
  const ExpectedReport& e = f.expected;

  auto want_bool = [&](const std::string& what, bool got, bool expect) {
    if (got != expect)
      out.push_back(what + ": got " + (got ? "true" : "false") + ", expected " +
                    (expect ? "true" : "false"));
  };
  auto want_real = [&](const std::string& what, double got, double expect) {
    if (std::abs(got - expect) > tol)
      out.push_back(what + ": got " + std::to_string(got) + ", expected " +
                    std::to_string(expect));
  };

  want_bool("strong", rep.strong.drift, e.strong);
  if (e.exact_strong_C)
    want_real("strong C", rep.strong.constant, e.strong_C);
  else if (rep.strong.constant < e.strong_C)
    out.push_back("strong C below band: " + std::to_string(rep.strong.constant));
  want_bool("weak 1->2", rep.weak_12.drift, e.weak_12);
  want_bool("weak 2->1", rep.weak_21.drift, e.weak_21);
  want_bool("ell 1->2", rep.ell_12.drift, e.ell_12);
  want_bool("ell 2->1", rep.ell_21.drift, e.ell_21);
  if (e.ell_12) want_real("ell 1->2 C", rep.ell_12.constant, e.ell_12_C);
  if (e.ell_21) want_real("ell 2->1 C", rep.ell_21.constant, e.ell_21_C);
  if (rep.relation != e.relation)
    out.push_back("relation: got " + relation_name(rep.relation) + ", expected " +
                  relation_name(e.relation));
  want_real("discrepancy", rep.discrepancy, e.discrepancy);
  want_real("min loss w1", rep.min_loss_1, e.min_loss_1);
  want_real("min loss w2", rep.min_loss_2, e.min_loss_2);

  // Witnesses must re-verify under expected_loss, not just be flagged.
  const auto d1 = mean_distribution(f.process, f.w1);
  const auto d2 = mean_distribution(f.process, f.w2);
  if (rep.weak_12.drift) {
    const Hypothesis& h = f.cls.hypotheses.at(*rep.weak_12.witness);
    if (!(expected_loss(h, d1, f.loss) <= rep.min_loss_1 + tol &&
          expected_loss(h, d2, f.loss) > rep.min_loss_2 + tol))
      out.push_back("weak 1->2 witness does not re-verify");
  }
  if (rep.ell_12.drift) {
    const Hypothesis& h = f.cls.hypotheses.at(*rep.ell_12.witness);
    if (!(expected_loss(h, d2, f.loss) > expected_loss(h, d1, f.loss) + tol))
      out.push_back("ell 1->2 witness does not re-verify");
  }
  if (rep.strong.drift && !(rep.weak_12.drift && rep.weak_21.drift))
    out.push_back("strong without weak in both directions");
  return out;
}

CountsLearner ce2_inconsistent_learner() {
  // Always returns the second-window optimum 1[x > -1/2], data ignored.
  return [](const FiniteDistribution&, const std::vector<std::int64_t>&) -> Hypothesis {
    return ThresholdHyp{0, -0.5, true};
  };
}

CountsLearner ce3_inconsistent_learner() {
  return [](const FiniteDistribution& d, const std::vector<std::int64_t>& counts) -> Hypothesis {
    bool saw_one = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Atom& a = d.atoms()[i];
      if (a.y == 1 && a.x == num1(1.0) && counts.at(i) > 0) saw_one = true;
    }
    if (!saw_one) return ThresholdHyp{0, 0.5, true};
    return ThresholdHyp{0, -0.5, true};
  };
}

}  // namespace driftlab
