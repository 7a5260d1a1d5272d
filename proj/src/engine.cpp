#include "driftlab/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>

namespace driftlab {

StreamSource concat_stream(const std::vector<Sample>& chunks) {
  StreamSource src;
  for (const Sample& s : chunks) {
    if (!src.points.empty()) src.change_points.push_back(src.points.size());
    src.points.insert(src.points.end(), s.points.begin(), s.points.end());
  }
  if (src.points.empty()) throw std::invalid_argument("empty stream");
  return src;
}

DetectorSpec parse_detector(std::string_view text) {
  DetectorSpec spec;
  const auto colon = text.find(':');
  const std::string kind(text.substr(0, colon));
  if (kind == "none") spec.kind = DetectorSpec::None;
  else if (kind == "ddm") spec.kind = DetectorSpec::Ddm;
  else if (kind == "sliding") spec.kind = DetectorSpec::Sliding;
  else if (kind == "oracle") spec.kind = DetectorSpec::Oracle;
  else throw std::invalid_argument("unknown detector kind: " + kind);
  if (colon == std::string_view::npos) return spec;
  std::istringstream in{std::string(text.substr(colon + 1))};
  std::string tok;
  while (std::getline(in, tok, ',')) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("bad detector parameter (want key=value): " + tok);
    const std::string key = tok.substr(0, eq);
    const double value = std::stod(tok.substr(eq + 1));
    if (key == "kappa") spec.kappa = value;
    else if (key == "w") spec.window = static_cast<std::size_t>(value);
    else if (key == "warn") spec.warn_sigma = value;
    else if (key == "drift") spec.drift_sigma = value;
    else if (key == "min_obs") spec.min_obs = static_cast<std::size_t>(value);
    else if (key == "at") spec.fire_at.push_back(static_cast<std::size_t>(value));
    else throw std::invalid_argument("unknown detector parameter: " + key);
  }
  return spec;
}

Policy parse_policy(std::string_view text) {
  if (text == "passive") return Policy::Passive;
  if (text == "active") return Policy::Active;
  if (text == "hybrid") return Policy::Hybrid;
  throw std::invalid_argument("unknown policy: " + std::string(text));
}

void Detector::reset() {
  n_ = 0;
  error_sum_ = 0.0;
  p_min_ = 1e300;
  s_min_ = 1e300;
  recent_.clear();
  ref_n_ = 0;
  ref_sum_ = 0.0;
  ref_sum2_ = 0.0;
  // oracle step counter deliberately survives resets
}

DetectorFlag Detector::update(double loss_value) {
  ++step_;
  switch (spec_.kind) {
    case DetectorSpec::None:
      return DetectorFlag::None;

    case DetectorSpec::Oracle: {
      for (std::size_t at : spec_.fire_at)
        if (step_ == at) return DetectorFlag::Drift;
      return DetectorFlag::None;
    }

    case DetectorSpec::Ddm: {
      ++n_;
      error_sum_ += loss_value;
      const double p = error_sum_ / static_cast<double>(n_);
      const double s = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(n_));
      if (n_ < spec_.min_obs) return DetectorFlag::None;
      if (p + s < p_min_ + s_min_) {
        p_min_ = p;
        s_min_ = s;
      }
      if (p + s > p_min_ + spec_.drift_sigma * s_min_) return DetectorFlag::Drift;
      if (p + s > p_min_ + spec_.warn_sigma * s_min_) return DetectorFlag::Warn;
      return DetectorFlag::None;
    }

    case DetectorSpec::Sliding: {
      // Tumbling blocks of w losses tested against the accumulated
      // reference. Testing every step would take the running maximum of
      // thousands of overlapping window means and blow the kappa-sigma
      // budget; one test per block keeps the looks independent.
      recent_.push_back(loss_value);
      if (recent_.size() < spec_.window) return DetectorFlag::None;
      double block_sum = 0.0, block_sum2 = 0.0;
      for (double v : recent_) {
        block_sum += v;
        block_sum2 += v * v;
      }
      const double block_mean = block_sum / static_cast<double>(recent_.size());
      DetectorFlag flag = DetectorFlag::None;
      // The reference must outgrow the block before testing: a short
      // reference couples a lucky-low mean with an underestimated variance.
      if (ref_n_ >= 2 * spec_.window) {
        const double ref_mean = ref_sum_ / static_cast<double>(ref_n_);
        // Pooled variance under the no-change hypothesis; standard error of
        // a difference of two sample means.
        const double n_all = static_cast<double>(ref_n_ + recent_.size());
        const double mean_all = (ref_sum_ + block_sum) / n_all;
        const double var_all =
            std::max((ref_sum2_ + block_sum2) / n_all - mean_all * mean_all, 0.0);
        const double se = std::sqrt(var_all * (1.0 / static_cast<double>(spec_.window) +
                                               1.0 / static_cast<double>(ref_n_)));
        if (block_mean > ref_mean + spec_.kappa * se) flag = DetectorFlag::Drift;
      }
      if (flag == DetectorFlag::None) {  // absorb only clean blocks
        ref_n_ += recent_.size();
        ref_sum_ += block_sum;
        ref_sum2_ += block_sum2;
      }
      recent_.clear();
      return flag;
    }
  }
  return DetectorFlag::None;
}

namespace {

Sample buffer_to_sample(const std::deque<LabeledPoint>& buffer) {
  Sample s;
  s.provenance = "stream-buffer";
  s.points.assign(buffer.begin(), buffer.end());
  return s;
}

}  // namespace

StreamLog run_stream(const StreamSource& source, Learner& learner, Detector& detector,
                     const EngineConfig& config) {
  if (config.init < 1) throw std::invalid_argument("init must be >= 1");
  if (source.size() <= config.init)
    throw std::invalid_argument("stream must be longer than the warm-up");

  StreamLog log;
  log.warmup = config.init;

  // Warm-up fit.
  Sample warm;
  warm.provenance = "stream-warmup";
  warm.points.assign(source.points.begin(),
                     source.points.begin() + static_cast<long>(config.init));
  learner.fit(warm);
  for (std::size_t i = 0; i < config.init; ++i)
    log.records.push_back(StreamRecord{i, 0.0, DetectorFlag::None, StreamRecord::Warmup});

  std::deque<LabeledPoint> buffer(warm.points.begin(), warm.points.end());
  const bool incremental = learner.incremental();

  // Active-policy retraining state: after a detection we collect `init`
  // points and refit from scratch; the previous model keeps scoring until
  // the new one is ready.
  bool collecting = false;
  std::deque<LabeledPoint> collect;
  std::size_t since_refit = 0;
  double loss_total = 0.0;
  std::size_t loss_count = 0;
  DetectorFlag prev_flag = DetectorFlag::None;

  for (std::size_t i = config.init; i < source.size(); ++i) {
    const LabeledPoint& pt = source.points[i];

    // Test first: the point's label must not reach the learner before here.
    const double l = point_loss(learner.predict_value(pt.x), pt.y, config.loss);
    loss_total += l;
    ++loss_count;
    const DetectorFlag flag = detector.update(l);
    const bool new_drift = flag == DetectorFlag::Drift && prev_flag != DetectorFlag::Drift;
    prev_flag = flag;

    StreamRecord rec{i, l, flag, StreamRecord::TestTrain};

    buffer.push_back(pt);
    if (buffer.size() > config.init) buffer.pop_front();

    // Then train, according to policy.
    if (config.policy == Policy::Passive || config.policy == Policy::Hybrid) {
      if (incremental) {
        learner.update(pt);
      } else if (++since_refit >= config.refit_every) {
        learner.fit(buffer_to_sample(buffer));
        since_refit = 0;
        rec.action = StreamRecord::Refit;
      }
    }
    if (config.policy == Policy::Active || config.policy == Policy::Hybrid) {
      if (collecting) {
        collect.push_back(pt);
        if (collect.size() >= config.init) {
          Sample s = buffer_to_sample(collect);
          s.provenance = "stream-retrain";
          learner.fit(s);
          collecting = false;
          collect.clear();
          detector.reset();
          prev_flag = DetectorFlag::None;
          rec.action = StreamRecord::Refit;
        }
      } else if (new_drift) {
        log.detections.push_back(i);
        if (config.reset_to_initial) {
          learner.fit(warm);  // h <- h0
          detector.reset();
          prev_flag = DetectorFlag::None;
          rec.action = StreamRecord::Reset;
        } else {
          collecting = true;
          collect.clear();
        }
      }
    } else if (new_drift) {
      log.detections.push_back(i);  // passive: record the onset, keep adapting
    }
    log.records.push_back(rec);
  }
  log.mean_itte = loss_count > 0 ? loss_total / static_cast<double>(loss_count) : 0.0;
  return log;
}

StreamLog run_stream(const StreamSource& source, const LearnerSpec& learner_spec,
                     const DetectorSpec& detector_spec, const EngineConfig& config) {
  auto learner = make_learner(learner_spec);
  Detector detector(detector_spec);
  return run_stream(source, *learner, detector, config);
}

std::vector<double> windowed_itte(const StreamLog& log, std::size_t w) {
  if (w < 1) throw std::invalid_argument("window must be >= 1");
  std::vector<double> losses;
  for (const StreamRecord& r : log.records)
    if (r.action != StreamRecord::Warmup) losses.push_back(r.loss);
  std::vector<double> out;
  if (losses.size() < w) return out;
  double acc = 0.0;
  for (std::size_t i = 0; i < losses.size(); ++i) {
    acc += losses[i];
    if (i >= w) acc -= losses[i - w];
    if (i + 1 >= w) out.push_back(acc / static_cast<double>(w));
  }
  return out;
}

namespace {

const char* action_name(StreamRecord::Action a) {
  switch (a) {
    case StreamRecord::Warmup: return "warmup";
    case StreamRecord::TestTrain: return "test-train";
    case StreamRecord::Refit: return "refit";
    case StreamRecord::Reset: return "reset";
  }
  return "?";
}

const char* flag_name(DetectorFlag f) {
  switch (f) {
    case DetectorFlag::None: return "none";
    case DetectorFlag::Warn: return "warn";
    case DetectorFlag::Drift: return "drift";
  }
  return "?";
}

}  // namespace

std::string stream_csv(const StreamLog& log) {
  std::ostringstream out;
  out << "step,loss,flag,action\n";
  for (const StreamRecord& r : log.records) {
    char loss_buf[32];
    std::snprintf(loss_buf, sizeof(loss_buf), "%.17g", r.loss);
    out << r.step << "," << (r.action == StreamRecord::Warmup ? "" : loss_buf) << ","
        << flag_name(r.flag) << "," << action_name(r.action) << "\n";
  }
  return out.str();
}

std::string stream_summary_json(const StreamLog& log) {
  std::ostringstream out;
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", log.mean_itte);
  out << "{\n  \"steps\": " << log.records.size() << ",\n  \"warmup\": " << log.warmup
      << ",\n  \"mean_itte\": " << buf << ",\n  \"detections\": [";
  for (std::size_t i = 0; i < log.detections.size(); ++i)
    out << (i ? ", " : "") << log.detections[i];
  out << "]\n}\n";
  return out.str();
}

}  // namespace driftlab
