#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "driftlab/core.hpp"
#include "driftlab/learners.hpp"

namespace driftlab {

/// Ordered stream of labeled points, usually concatenated scenario samples
/// with the true change points recorded for evaluation.
struct StreamSource {
  std::vector<LabeledPoint> points;
  std::vector<std::size_t> change_points;  // strictly increasing, within length

  std::size_t size() const { return points.size(); }
};

StreamSource concat_stream(const std::vector<Sample>& chunks);

enum class DetectorFlag { None, Warn, Drift };

struct DetectorSpec {
  enum Kind { None, Ddm, Sliding, Oracle } kind = None;
  // ddm
  double warn_sigma = 2.0;
  double drift_sigma = 3.0;
  std::size_t min_obs = 30;
  // sliding-threshold
  double kappa = 3.0;
  std::size_t window = 100;
  // oracle
  std::vector<std::size_t> fire_at;  // absolute post-warmup step indices
};

DetectorSpec parse_detector(std::string_view text);  // "ddm", "sliding:kappa=4,w=100", ...

/// Error-rate change detectors driven by the per-step ITTE loss.
///
/// ddm monitors the running error mean p and deviation s against the best
/// (p_min, s_min) seen since reset; warn at p+s > p_min + warn_sigma*s_min,
/// drift at p+s > p_min + drift_sigma*s_min.
///
/// sliding compares the mean of the last `window` losses against the mean
/// of all older losses since reset and flags when the recent mean exceeds
/// it by kappa * sd_ref / sqrt(window).
class Detector {
 public:
  explicit Detector(DetectorSpec spec) : spec_(std::move(spec)) {}

  DetectorFlag update(double loss_value);
  void reset();
  const DetectorSpec& spec() const { return spec_; }

 private:
  DetectorSpec spec_;
  // ddm state
  std::size_t n_ = 0;
  double error_sum_ = 0.0;
  double p_min_ = 1e300, s_min_ = 1e300;
  // sliding state
  std::vector<double> recent_;
  std::size_t ref_n_ = 0;
  double ref_sum_ = 0.0, ref_sum2_ = 0.0;
  // oracle state
  std::size_t step_ = 0;
};

enum class Policy { Passive, Active, Hybrid };

Policy parse_policy(std::string_view text);

struct StreamRecord {
  std::size_t step = 0;
  double loss = 0.0;
  DetectorFlag flag = DetectorFlag::None;
  enum Action { Warmup, TestTrain, Refit, Reset } action = TestTrain;
};

struct StreamLog {
  std::vector<StreamRecord> records;      // one per consumed stream point
  std::vector<std::size_t> detections;    // steps where drift was flagged
  std::size_t warmup = 0;                 // points consumed before ITTE accounting
  double mean_itte = 0.0;                 // mean loss over the accounted steps

  std::size_t size() const { return records.size(); }
};

struct EngineConfig {
  Policy policy = Policy::Passive;
  Loss loss = Loss::ZeroOne;
  std::size_t init = 200;          // warm-up points fitted before accounting starts
  std::size_t refit_every = 50;    // passive fallback period for batch learners
  bool reset_to_initial = false;   // active option: h <- h0 instead of retraining
  std::uint64_t seed = 0;
};

/// Algorithm-1 run: every post-warmup point is scored before it reaches the
/// learner (test-then-train), the detector sees the loss, and the policy
/// decides the adaptation. Batch-only learners in passive mode refit from a
/// FIFO buffer every refit_every steps; active mode retrains on the next
/// `init` points after a detection (or resets to the warm-up model).
StreamLog run_stream(const StreamSource& source, Learner& learner, Detector& detector,
                     const EngineConfig& config);

StreamLog run_stream(const StreamSource& source, const LearnerSpec& learner_spec,
                     const DetectorSpec& detector_spec, const EngineConfig& config);

/// Trailing mean of the accounted losses, defined from step w onward.
std::vector<double> windowed_itte(const StreamLog& log, std::size_t w);

std::string stream_csv(const StreamLog& log);           // step,loss,flag,action
std::string stream_summary_json(const StreamLog& log);  // mean ITTE + detections

}  // namespace driftlab
