#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "driftlab/engine.hpp"
#include "driftlab/streams.hpp"

using namespace driftlab;

namespace {

StreamSource switch_stream(std::size_t n, std::size_t at, std::uint64_t seed) {
  const auto t = binarize(generate(parse_generator("sea:seed=" + std::to_string(seed)), 3000), 1);
  const auto scen = build_2x2(t, 3, Rng::derive({seed, 5}));
  return concat_stream({scen.sample(0, 0, at, Rng::derive({seed, 6})),
                        scen.sample(0, 1, n - at, Rng::derive({seed, 7}))});
}

/// Records the order of predict/update calls to pin the test-then-train
/// contract: the loss at step k must be computed before point k trains.
class SentinelLearner final : public Learner {
 public:
  SentinelLearner() : Learner(LearnerSpec{"constant", {}, 0}) {}
  bool incremental() const override { return true; }

  mutable std::vector<std::pair<char, std::size_t>> calls;  // ('p'|'u', running index)
  std::size_t seen = 0;

 private:
  void do_fit(const Sample&) override {}
  void do_update(const LabeledPoint&) override {
    calls.emplace_back('u', seen);
    ++seen;
  }
  double do_predict(const Instance&) const override {
    calls.emplace_back('p', seen);
    return 0.0;
  }
};

}  // namespace

TEST_CASE("windowed ITTE: constants, full window, step crossing") {
  StreamLog log;
  log.warmup = 0;
  for (std::size_t i = 0; i < 10; ++i)
    log.records.push_back({i, 0.25, DetectorFlag::None, StreamRecord::TestTrain});
  const auto series = windowed_itte(log, 4);
  REQUIRE(series.size() == 7);
  for (double v : series) CHECK(v == doctest::Approx(0.25));
  const auto whole = windowed_itte(log, 10);
  REQUIRE(whole.size() == 1);
  CHECK(whole[0] == doctest::Approx(0.25));

  StreamLog step;
  step.warmup = 0;
  for (std::size_t i = 0; i < 100; ++i)
    step.records.push_back({i, i < 50 ? 0.0 : 1.0, DetectorFlag::None, StreamRecord::TestTrain});
  const auto s = windowed_itte(step, 10);
  // The trailing mean crosses 1/2 within one window of the change point.
  std::size_t cross = 0;
  while (cross < s.size() && s[cross] < 0.5) ++cross;
  CHECK(cross >= 50 - 10);
  CHECK(cross <= 50 + 10);
}

TEST_CASE("detectors: silence on zero loss, deterministic mean shift, ddm jump") {
  {
    Detector d(parse_detector("sliding:kappa=3,w=50"));
    for (int i = 0; i < 5000; ++i) CHECK(d.update(0.0) == DetectorFlag::None);
  }
  {
    Detector d(parse_detector("sliding:kappa=3,w=100"));
    Rng rng(5);
    for (int i = 0; i < 1000; ++i) d.update(rng.bernoulli(0.1) ? 1.0 : 0.0);
    int fired_at = -1;
    for (int i = 0; i < 400; ++i) {
      if (d.update(rng.bernoulli(0.5) ? 1.0 : 0.0) == DetectorFlag::Drift) {
        fired_at = i;
        break;
      }
    }
    CHECK(fired_at >= 0);
    CHECK(fired_at <= 200);  // within 2w of the shift
  }
  {
    Detector d(parse_detector("ddm"));
    Rng rng(6);
    DetectorFlag flag = DetectorFlag::None;
    for (int i = 0; i < 1000; ++i) flag = d.update(rng.bernoulli(0.1) ? 1.0 : 0.0);
    int fired_at = -1;
    for (int i = 0; i < 600; ++i) {
      if (d.update(rng.bernoulli(0.9) ? 1.0 : 0.0) == DetectorFlag::Drift) {
        fired_at = i;
        break;
      }
    }
    CHECK(fired_at >= 0);
    CHECK(fired_at <= 500);
  }
  CHECK_THROWS_AS(parse_detector("adwin"), std::invalid_argument);
}

TEST_CASE("test-then-train order holds for every consumed point") {
  StreamSource src;
  for (std::size_t i = 0; i < 60; ++i)
    src.points.push_back({num1(static_cast<double>(i)), static_cast<int>(i % 2)});
  SentinelLearner sentinel;
  Detector det(parse_detector("none"));
  EngineConfig cfg;
  cfg.init = 10;
  run_stream(src, sentinel, det, cfg);
  // Predicts at update-count k must precede update k for the same point.
  std::size_t updates = 0;
  for (const auto& [kind, at] : sentinel.calls) {
    if (kind == 'p') CHECK(at == updates);
    else ++updates;
  }
  CHECK(updates == 50);
}

TEST_CASE("stationary stream: passive learning drives windowed ITTE toward zero") {
  const auto t = binarize(generate(parse_generator("sea:seed=8,concept=1"), 3000), 1);
  const auto scen = build_2x2(t, 3, 9);
  const auto src = concat_stream({scen.sample(0, 0, 3000, 11)});
  EngineConfig cfg;
  cfg.policy = Policy::Passive;
  cfg.init = 200;
  const auto log = run_stream(src, parse_learner_spec("gnb"), parse_detector("none"), cfg);
  const auto series = windowed_itte(log, 200);
  REQUIRE(!series.empty());
  // SEA is noise free; a converging learner ends well below chance.
  CHECK(series.back() <= 0.2);
  CHECK(log.records.size() == src.size());
}

TEST_CASE("frozen model under a label switch jumps by its complement accuracy") {
  const auto src = switch_stream(3000, 1500, 17);
  EngineConfig cfg;
  cfg.policy = Policy::Active;  // batch learner, no detector: model stays frozen
  cfg.init = 300;
  const auto log = run_stream(src, parse_learner_spec("dt:seed=2"), parse_detector("none"), cfg);
  const auto series = windowed_itte(log, 200);
  const double before = series[1000];  // well after warm-up, before the switch
  const double after = series.back();
  CHECK(after >= 1.0 - before - 0.1);  // complement within windowing slack
  CHECK(after - before >= 0.3);
}

TEST_CASE("active policy with an oracle detector restores second-concept performance") {
  const std::size_t switch_at = 1500;
  const auto src = switch_stream(4000, switch_at, 23);
  EngineConfig cfg;
  cfg.policy = Policy::Active;
  cfg.init = 300;
  DetectorSpec oracle;
  oracle.kind = DetectorSpec::Oracle;
  oracle.fire_at = {switch_at - cfg.init};  // detector sees post-warmup steps

  auto learner = make_learner(parse_learner_spec("dt:seed=3"));
  Detector det(oracle);
  const auto log = run_stream(src, *learner, det, cfg);
  REQUIRE(log.detections.size() == 1);

  // Reference: the same learner trained only on second-concept data.
  const auto t = binarize(generate(parse_generator("sea:seed=23"), 3000), 1);
  const auto scen = build_2x2(t, 3, Rng::derive({23ULL, 5}));
  auto ref = make_learner(parse_learner_spec("dt:seed=3"));
  ref->fit(scen.sample(0, 1, 300, 101));
  const auto eval = scen.sample(0, 1, 2000, 102);
  const double ref_loss = 1.0 - ref->accuracy(eval);

  const auto series = windowed_itte(log, 300);
  CHECK(std::abs(series.back() - ref_loss) <= 0.03);
}

TEST_CASE("hybrid policy refits batch learners periodically and on detection") {
  const auto src = switch_stream(2500, 1200, 29);
  EngineConfig cfg;
  cfg.policy = Policy::Hybrid;
  cfg.init = 200;
  const auto log = run_stream(src, parse_learner_spec("dt:seed=4"), parse_detector("ddm"), cfg);
  std::size_t refits = 0;
  for (const auto& r : log.records)
    if (r.action == StreamRecord::Refit) ++refits;
  CHECK(refits >= 2);
  const auto series = windowed_itte(log, 150);
  CHECK(series.back() <= 0.35);  // recovered after the switch
}

TEST_CASE("ITTE jump mirrors ell-drift when the optimal loss is constant") {
  // Class with both threshold orientations: each window is separable, so the
  // optimal loss stays constant at zero while the optimal model flips.
  const FiniteHypothesisClass cls(
      {ThresholdHyp{0, 0.5, true}, ThresholdHyp{0, 0.5, false}});
  const auto clean = uniform_mix({{0, 0}, {1, 1}});
  const auto flipped = uniform_mix({{0, 1}, {1, 0}});
  const FiniteDistribution skewed({{0.25, num1(0), 0}, {0.75, num1(1), 1}});

  auto run_jump = [&](const FiniteDistribution& second) {
    const auto p = uniform_process({clean, second});
    StreamSource src = concat_stream(
        {draw_sample(clean, 1500, 41), draw_sample(second, 1500, 43)});
    auto erm = make_erm_learner(cls, Loss::ZeroOne);
    Detector det(parse_detector("none"));
    EngineConfig cfg;
    cfg.policy = Policy::Active;  // frozen after warm-up
    cfg.init = 300;
    const auto log = run_stream(src, *erm, det, cfg);
    const auto series = windowed_itte(log, 300);
    const double before = series[800];
    const double after = series.back();
    const auto ell = check_ell(p, cls, Loss::ZeroOne, TimeWindow::single(0),
                               TimeWindow::single(1));
    const auto rel = optimal_loss_relation(p, cls, Loss::ZeroOne, TimeWindow::single(0),
                                           TimeWindow::single(1));
    REQUIRE(rel == LossRelation::Constant);
    return std::make_pair(after - before, ell);
  };

  {
    const auto [jump, ell] = run_jump(flipped);  // label switch: ell with C = 1
    CHECK(ell.drift);
    CHECK(ell.constant == doctest::Approx(1.0));
    CHECK(jump >= ell.constant / 2.0);
  }
  {
    const auto [jump, ell] = run_jump(skewed);  // virtual-only: no ell, no jump
    CHECK_FALSE(ell.drift);
    CHECK(jump < 0.05);
  }
}

TEST_CASE("active reset option restores the warm-up model") {
  const auto src = switch_stream(2200, 1100, 37);
  EngineConfig cfg;
  cfg.policy = Policy::Active;
  cfg.init = 200;
  cfg.reset_to_initial = true;
  DetectorSpec oracle;
  oracle.kind = DetectorSpec::Oracle;
  oracle.fire_at = {1100 - cfg.init};
  auto learner = make_learner(parse_learner_spec("dt:seed=6"));
  Detector det(oracle);
  const auto log = run_stream(src, *learner, det, cfg);
  REQUIRE(log.detections.size() == 1);
  std::size_t resets = 0;
  for (const auto& r : log.records)
    if (r.action == StreamRecord::Reset) ++resets;
  CHECK(resets == 1);
  // The restored first-concept model keeps failing on the switched labels.
  const auto series = windowed_itte(log, 200);
  CHECK(series.back() >= 0.5);
}

TEST_CASE("stream log serialization") {
  const auto src = switch_stream(1000, 500, 31);
  EngineConfig cfg;
  cfg.init = 100;
  const auto log = run_stream(src, parse_learner_spec("gnb"), parse_detector("ddm"), cfg);
  const std::string csv = stream_csv(log);
  CHECK(csv.rfind("step,loss,flag,action\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(log.records.size()) + 1);
  const std::string json = stream_summary_json(log);
  CHECK(json.find("\"mean_itte\"") != std::string::npos);
  CHECK(json.find("\"detections\"") != std::string::npos);
}

TEST_CASE("engine rejects streams shorter than the warm-up") {
  StreamSource src;
  for (int i = 0; i < 10; ++i) src.points.push_back({num1(i), 0});
  EngineConfig cfg;
  cfg.init = 10;
  CHECK_THROWS_AS(run_stream(src, parse_learner_spec("gnb"), parse_detector("none"), cfg),
                  std::invalid_argument);
}
