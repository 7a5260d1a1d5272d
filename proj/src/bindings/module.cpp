#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "driftlab/engine.hpp"
#include "driftlab/experiments.hpp"
#include "driftlab/fixtures.hpp"
#include "driftlab/learners.hpp"

namespace py = pybind11;
using namespace driftlab;

namespace {

FiniteDistribution dist_from_atoms(
    const std::vector<std::tuple<double, std::vector<double>, int>>& atoms) {
  std::vector<Atom> out;
  for (const auto& [w, xs, y] : atoms) out.push_back(Atom{w, Instance{xs, {}}, y});
  return FiniteDistribution(std::move(out));
}

// The stl.h caster would unpack std::variant into its (unregistered)
// alternatives, so hypotheses cross the boundary in an opaque holder.
struct PyHypothesis {
  Hypothesis h;
};

}  // namespace

PYBIND11_MODULE(_driftlab, m) {
  m.doc() = "drift oracles, stream learners, and experiment harness";

  py::class_<Instance>(m, "Instance")
      .def(py::init([](std::vector<double> numeric, std::vector<int> categorical) {
             return Instance{std::move(numeric), std::move(categorical)};
           }),
           py::arg("numeric"), py::arg("categorical") = std::vector<int>{})
      .def_readonly("numeric", &Instance::numeric)
      .def_readonly("categorical", &Instance::categorical)
      .def("__repr__", [](const Instance& x) {
        std::string out = "Instance([";
        for (std::size_t i = 0; i < x.numeric.size(); ++i)
          out += (i ? "," : "") + std::to_string(x.numeric[i]);
        return out + "])";
      });

  py::enum_<Loss>(m, "Loss").value("zero_one", Loss::ZeroOne).value("mse", Loss::Mse);

  py::class_<FiniteDistribution>(m, "FiniteDistribution")
      .def(py::init(&dist_from_atoms), py::arg("atoms"),
           "atoms: list of (weight, [numeric features], label)")
      .def("merged", &FiniteDistribution::merged)
      .def("__len__", &FiniteDistribution::size)
      .def("atoms", [](const FiniteDistribution& d) {
        std::vector<std::tuple<double, std::vector<double>, int>> out;
        for (const Atom& a : d.atoms()) out.emplace_back(a.weight, a.x.numeric, a.y);
        return out;
      });

  py::class_<TimeWindow>(m, "TimeWindow")
      .def(py::init([](std::vector<std::size_t> idx) { return TimeWindow{std::move(idx)}; }),
           py::arg("indices"))
      .def_readonly("indices", &TimeWindow::indices);

  py::class_<DriftProcess>(m, "DriftProcess")
      .def(py::init([](const std::vector<std::pair<double, FiniteDistribution>>& points) {
             std::vector<TimePoint> tps;
             for (const auto& [p, d] : points) tps.push_back(TimePoint{p, d});
             return DriftProcess(std::move(tps));
           }),
           py::arg("timepoints"))
      .def("__len__", &DriftProcess::size);

  m.def("uniform_process", [](std::vector<FiniteDistribution> dists) {
    return uniform_process(std::move(dists));
  });
  m.def("mean_distribution", &mean_distribution, py::arg("process"), py::arg("window"));
  m.def("total_variation", &total_variation);
  m.def("has_distribution_drift", &has_distribution_drift, py::arg("process"),
        py::arg("tol") = kTol);
  m.def("format_process", &format_process);
  m.def("parse_process", [](const std::string& text) { return parse_process(text); });

  py::class_<Sample>(m, "Sample")
      .def("__len__", &Sample::size)
      .def("points", [](const Sample& s) {
        std::vector<std::pair<std::vector<double>, int>> out;
        for (const auto& p : s.points) out.emplace_back(p.x.numeric, p.y);
        return out;
      });
  m.def("draw_sample", &draw_sample, py::arg("dist"), py::arg("n"), py::arg("seed"));

  // Hypotheses are exposed through small factories plus expected_loss.
  py::class_<PyHypothesis>(m, "Hypothesis")
      .def("__repr__", [](const PyHypothesis& h) { return describe(h.h); })
      .def("predict",
           [](const PyHypothesis& h, const Instance& x) { return predict(h.h, x); });
  m.def("threshold", [](double theta, bool greater, std::size_t feature) {
    return PyHypothesis{ThresholdHyp{feature, theta, greater}};
  }, py::arg("theta"), py::arg("greater") = true, py::arg("feature") = 0);
  m.def("constant", [](double v) { return PyHypothesis{ConstantHyp{v}}; });
  m.def("linear", [](std::vector<double> w, double b) {
    return PyHypothesis{LinearHyp{std::move(w), b}};
  });

  py::class_<FiniteHypothesisClass>(m, "HypothesisClass")
      .def(py::init([](const std::vector<PyHypothesis>& hs) {
             std::vector<Hypothesis> out;
             for (const PyHypothesis& h : hs) out.push_back(h.h);
             return FiniteHypothesisClass(std::move(out));
           }),
           py::arg("hypotheses"))
      .def("__len__", &FiniteHypothesisClass::size)
      .def("__getitem__", [](const FiniteHypothesisClass& c, std::size_t i) {
        return PyHypothesis{c.hypotheses.at(i)};
      });
  m.def("threshold_grid",
        [](const DriftProcess& p, std::size_t feature) { return threshold_grid(p, feature); },
        py::arg("process"), py::arg("feature") = 0);

  m.def("expected_loss",
        [](const PyHypothesis& h, const FiniteDistribution& d, Loss loss) {
          return expected_loss(h.h, d, loss);
        },
        py::arg("hypothesis"), py::arg("dist"), py::arg("loss") = Loss::ZeroOne);
  m.def("argmin_set", &argmin_set, py::arg("cls"), py::arg("dist"),
        py::arg("loss") = Loss::ZeroOne, py::arg("tol") = kTol);

  py::enum_<LossRelation>(m, "LossRelation")
      .value("increasing", LossRelation::Increasing)
      .value("decreasing", LossRelation::Decreasing)
      .value("constant", LossRelation::Constant);

  py::class_<StrongResult>(m, "StrongResult")
      .def_readonly("drift", &StrongResult::drift)
      .def_readonly("constant", &StrongResult::constant);
  py::class_<WeakResult>(m, "WeakResult")
      .def_readonly("drift", &WeakResult::drift)
      .def_readonly("witness", &WeakResult::witness);
  py::class_<EllResult>(m, "EllResult")
      .def_readonly("drift", &EllResult::drift)
      .def_readonly("witness", &EllResult::witness)
      .def_readonly("constant", &EllResult::constant);
  py::class_<DriftReport>(m, "DriftReport")
      .def_readonly("strong", &DriftReport::strong)
      .def_readonly("weak_12", &DriftReport::weak_12)
      .def_readonly("weak_21", &DriftReport::weak_21)
      .def_readonly("ell_12", &DriftReport::ell_12)
      .def_readonly("ell_21", &DriftReport::ell_21)
      .def_readonly("relation", &DriftReport::relation)
      .def_readonly("discrepancy", &DriftReport::discrepancy)
      .def_readonly("min_loss_1", &DriftReport::min_loss_1)
      .def_readonly("min_loss_2", &DriftReport::min_loss_2);

  m.def("check_strong_h", &check_strong_H, py::arg("process"), py::arg("cls"), py::arg("loss"),
        py::arg("w1"), py::arg("w2"), py::arg("tol") = kTol);
  m.def("check_weak_h", &check_weak_H, py::arg("process"), py::arg("cls"), py::arg("loss"),
        py::arg("w_from"), py::arg("w_to"), py::arg("tol") = kTol);
  m.def("check_ell", &check_ell, py::arg("process"), py::arg("cls"), py::arg("loss"),
        py::arg("w_from"), py::arg("w_to"), py::arg("tol") = kTol);
  m.def("optimal_loss_relation", &optimal_loss_relation, py::arg("process"), py::arg("cls"),
        py::arg("loss"), py::arg("w1"), py::arg("w2"), py::arg("tol") = kTol);
  m.def("discrepancy", &discrepancy);
  m.def("has_real_drift", &has_real_drift, py::arg("process"), py::arg("w1"), py::arg("w2"),
        py::arg("tol") = kTol);
  m.def("check_strong_h_universal_mse", &check_strong_H_universal_mse, py::arg("process"),
        py::arg("w1"), py::arg("w2"), py::arg("tol") = kTol);
  m.def("drift_report", &compute_drift_report, py::arg("process"), py::arg("cls"),
        py::arg("loss"), py::arg("w1"), py::arg("w2"), py::arg("tol") = kTol);

  m.def("check_a_drift_erm",
        [](const DriftProcess& p, const FiniteHypothesisClass& cls, Loss loss,
           const TimeWindow& w1, const TimeWindow& w2, std::size_t n, double C,
           std::size_t trials, std::uint64_t seed) {
          const auto r =
              check_A_drift_mc(p, erm_learner(cls, loss), loss, w1, w2, n, n, C, trials, seed);
          return r.estimate;
        },
        py::arg("process"), py::arg("cls"), py::arg("loss"), py::arg("w1"), py::arg("w2"),
        py::arg("n") = 2000, py::arg("C") = 0.05, py::arg("trials") = 200, py::arg("seed") = 1);

  // Fixtures.
  py::class_<Fixture>(m, "Fixture")
      .def_readonly("name", &Fixture::name)
      .def_readonly("process", &Fixture::process)
      .def_property_readonly("cls", [](const Fixture& f) { return f.cls; })
      .def_readonly("w1", &Fixture::w1)
      .def_readonly("w2", &Fixture::w2)
      .def_readonly("note", &Fixture::note);
  m.def("make_fixture", [](const std::string& name) { return make_fixture(parse_fixture(name)); });
  m.def("fixture_names", [] {
    std::vector<std::string> out;
    for (FixtureId id : all_fixture_ids()) out.push_back(fixture_name(id));
    return out;
  });
  m.def("fixture_mismatches",
        [](const Fixture& f) { return fixture_mismatches(f); });

  // Learners.
  py::class_<Learner>(m, "Learner")
      .def("fit",
           [](Learner& l, const std::vector<std::pair<std::vector<double>, int>>& points) {
             Sample s;
             for (const auto& [xs, y] : points) s.points.push_back({Instance{xs, {}}, y});
             l.fit(s);
           })
      .def("update",
           [](Learner& l, const std::vector<double>& xs, int y) {
             l.update(LabeledPoint{Instance{xs, {}}, y});
           })
      .def("predict",
           [](const Learner& l, const std::vector<double>& xs) {
             return l.predict(Instance{xs, {}});
           })
      .def("predict_value",
           [](const Learner& l, const std::vector<double>& xs) {
             return l.predict_value(Instance{xs, {}});
           })
      .def_property_readonly("incremental", &Learner::incremental);
  m.def("make_learner",
        [](const std::string& spec) { return make_learner(parse_learner_spec(spec)); },
        py::arg("spec"), "e.g. 'knn:k=5' or 'rf:trees=10,depth=10,seed=1'");

  // Streams and scenarios.
  py::class_<DatasetTable>(m, "DatasetTable").def("__len__", &DatasetTable::size);
  m.def("generate",
        [](const std::string& spec, std::size_t n) { return generate(parse_generator(spec), n); },
        py::arg("spec"), py::arg("n"));
  m.def("load_csv", &load_csv, py::arg("csv_path"), py::arg("schema_path"));
  m.def("permute", &permute);
  m.def("binarize", &binarize);
  py::class_<DriftScenario>(m, "DriftScenario")
      .def("sample", &DriftScenario::sample, py::arg("i"), py::arg("j"), py::arg("n"),
           py::arg("seed"))
      .def("cell_distribution", &DriftScenario::cell_distribution, py::arg("i"), py::arg("j"));
  m.def("build_2x2", &build_2x2, py::arg("table"), py::arg("tree_depth") = 3,
        py::arg("seed") = 0);
  m.def("xor_window_sample", &xor_window_sample, py::arg("window"), py::arg("n"),
        py::arg("seed"));

  // Engine.
  py::class_<StreamLog>(m, "StreamLog")
      .def_readonly("mean_itte", &StreamLog::mean_itte)
      .def_readonly("detections", &StreamLog::detections)
      .def_readonly("warmup", &StreamLog::warmup)
      .def("__len__", &StreamLog::size)
      .def("losses", [](const StreamLog& log) {
        std::vector<double> out;
        for (const auto& r : log.records)
          if (r.action != StreamRecord::Warmup) out.push_back(r.loss);
        return out;
      })
      .def("csv", &stream_csv)
      .def("summary_json", &stream_summary_json);
  m.def("windowed_itte", &windowed_itte, py::arg("log"), py::arg("w"));
  m.def("run_stream",
        [](const std::vector<Sample>& chunks, const std::string& learner,
           const std::string& detector, const std::string& policy, std::size_t init,
           std::uint64_t seed) {
          EngineConfig cfg;
          cfg.policy = parse_policy(policy);
          cfg.init = init;
          cfg.seed = seed;
          return run_stream(concat_stream(chunks), parse_learner_spec(learner),
                            parse_detector(detector), cfg);
        },
        py::arg("chunks"), py::arg("learner") = "gnb", py::arg("detector") = "ddm",
        py::arg("policy") = "hybrid", py::arg("init") = 200, py::arg("seed") = 0);

  // Statistics.
  py::class_<WelchResult>(m, "WelchResult")
      .def_readonly("t", &WelchResult::t)
      .def_readonly("dof", &WelchResult::dof)
      .def_readonly("p", &WelchResult::p);
  m.def("welch_t_test",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return welch_t_test(a, b);
        });
  m.def("regularized_incomplete_beta", &regularized_incomplete_beta);
}
