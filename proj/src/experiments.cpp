#include "driftlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "driftlab/engine.hpp"
#include "driftlab/fixtures.hpp"
#include "driftlab/learners.hpp"
#include "driftlab/parallel.hpp"

namespace driftlab {

namespace {

std::string fmt(double v, const char* spec = "%.17g") {
  char buf[40];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

// Datasets are generator strings ("sea", "sine:concept=2") or CSV references
// ("csv:data=rows.csv,schema=cols.schema").
struct DatasetSource {
  std::string name;
  bool is_csv = false;
  GeneratorConfig gen;
  std::string csv_path, schema_path;
  std::optional<DatasetTable> csv_cache;
};

DatasetSource make_source(const std::string& text) {
  DatasetSource src;
  src.name = text.substr(0, text.find(':'));
  if (src.name == "csv") {
    src.is_csv = true;
    std::istringstream in(text.substr(4));
    std::string tok;
    while (std::getline(in, tok, ',')) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("bad csv dataset spec: " + text);
      const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
      if (key == "data") src.csv_path = val;
      else if (key == "schema") src.schema_path = val;
      else if (key == "name") src.name = val;
      else throw std::invalid_argument("unknown csv dataset key: " + key);
    }
    if (src.csv_path.empty() || src.schema_path.empty())
      throw std::invalid_argument("csv dataset needs data= and schema=: " + text);
    if (src.name == "csv")
      src.name = std::filesystem::path(src.csv_path).stem().string();
    src.csv_cache = load_csv(src.csv_path, src.schema_path);
  } else {
    src.gen = parse_generator(text);
  }
  return src;
}

// Mis-specified generators are configuration errors and throw; a csv file
// that fails to load is reported and the run continues with the rest.
std::vector<DatasetSource> load_sources(const std::vector<std::string>& datasets) {
  std::vector<DatasetSource> sources;
  for (const std::string& d : datasets) {
    if (d.substr(0, d.find(':')) != "csv") {
      sources.push_back(make_source(d));
      continue;
    }
    try {
      sources.push_back(make_source(d));
    } catch (const std::exception& e) {
      std::fprintf(stderr, "dataset '%s' skipped: %s\n", d.c_str(), e.what());
    }
  }
  if (sources.empty()) throw std::invalid_argument("no usable datasets");
  return sources;
}

DriftScenario scenario_for(const DatasetSource& src, const ExperimentConfig& cfg,
                           std::size_t dataset_idx, int rep) {
  const std::uint64_t base =
      Rng::derive({cfg.seed, 0x7363656EULL, dataset_idx, static_cast<std::uint64_t>(rep)});
  DatasetTable table;
  if (src.is_csv) {
    table = *src.csv_cache;
  } else {
    GeneratorConfig g = src.gen;
    g.seed = Rng::derive({base, 1});
    table = generate(g, cfg.table_rows);
  }
  table = permute(table, Rng::derive({base, 2}));
  table = binarize(table, Rng::derive({base, 3}));
  return build_2x2(table, cfg.segment_depth, Rng::derive({base, 4}));
}

Sample merge_samples(const Sample& a, const Sample& b, std::uint64_t shuffle_seed) {
  Sample out = a;
  out.provenance = a.provenance + "+" + b.provenance;
  out.points.insert(out.points.end(), b.points.begin(), b.points.end());
  // A sample from the composed window is i.i.d. from the mixture, so the
  // two halves must interleave; concatenation order would leak into
  // insertion-order tie-breaks.
  Rng rng(Rng::derive({shuffle_seed, 0x6D696C78ULL}));
  for (std::size_t i = 0; i + 1 < out.points.size(); ++i) {
    const auto j = i + rng.below(out.points.size() - i);
    std::swap(out.points[i], out.points[j]);
  }
  return out;
}

struct RunSpec {
  std::string condition;
  std::vector<std::pair<int, int>> train_cells;  // union of samples
  std::pair<int, int> test_cell;
};

std::uint64_t cells_key(const std::vector<std::pair<int, int>>& cells) {
  std::uint64_t k = 0x63656C6CULL;
  for (const auto& [i, j] : cells)
    k = Rng::derive({k, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(j)});
  return k;
}

// One scenario per (dataset, rep); conditions with the same training cells
// share the trained model: one fit per training window, evaluated per cell.
ResultTable run_grid(const ExperimentConfig& cfg, const std::vector<RunSpec>& conditions,
                     const std::string& experiment) {
  if (cfg.effective_reps() < 2)
    throw std::invalid_argument("experiments need at least 2 repetitions for the t-tests");
  if (cfg.train_size < 1 || cfg.test_size < 1)
    throw std::invalid_argument("train and test sizes must be >= 1");
  ResultTable table;
  table.experiment = experiment;
  const int reps = cfg.effective_reps();
  std::vector<DatasetSource> sources = load_sources(cfg.datasets);

  struct Slot {
    std::vector<double> acc;  // per (condition, model) accuracy
  };
  const std::size_t jobs = sources.size() * static_cast<std::size_t>(reps);
  std::vector<Slot> slots(jobs);

  parallel_for_index(jobs, cfg.threads, [&](std::size_t job) {
    const std::size_t d_idx = job / static_cast<std::size_t>(reps);
    const int rep = static_cast<int>(job % static_cast<std::size_t>(reps));
    const DatasetSource& src = sources[d_idx];
    const DriftScenario scen = scenario_for(src, cfg, d_idx, rep);
    const std::uint64_t base =
        Rng::derive({cfg.seed, 0x72756E00ULL, d_idx, static_cast<std::uint64_t>(rep)});

    std::map<std::pair<int, int>, Sample> tests;
    for (const RunSpec& c : conditions) {
      if (tests.count(c.test_cell)) continue;
      tests.emplace(c.test_cell,
                    scen.sample(c.test_cell.first, c.test_cell.second, cfg.test_size,
                                Rng::derive({base, 0x74657374ULL,
                                             static_cast<std::uint64_t>(c.test_cell.first),
                                             static_cast<std::uint64_t>(c.test_cell.second)})));
    }
    std::map<std::uint64_t, Sample> trains;
    for (const RunSpec& c : conditions) {
      const std::uint64_t key = cells_key(c.train_cells);
      if (trains.count(key)) continue;
      Sample train;
      for (std::size_t u = 0; u < c.train_cells.size(); ++u) {
        const auto [i, j] = c.train_cells[u];
        Sample part = scen.sample(i, j, cfg.train_size,
                                  Rng::derive({base, 0x7472616EULL, key, u}));
        train = u == 0 ? std::move(part)
                       : merge_samples(train, part, Rng::derive({base, key, u}));
      }
      trains.emplace(key, std::move(train));
    }

    Slot& slot = slots[job];
    slot.acc.assign(conditions.size() * cfg.models.size(), 0.0);
    for (std::size_t m = 0; m < cfg.models.size(); ++m) {
      std::map<std::uint64_t, std::unique_ptr<Learner>> fitted;
      for (std::size_t c = 0; c < conditions.size(); ++c) {
        const std::uint64_t key = cells_key(conditions[c].train_cells);
        auto it = fitted.find(key);
        if (it == fitted.end()) {
          LearnerSpec spec = parse_learner_spec(cfg.models[m]);
          spec.seed = Rng::derive({base, 0x6D6F6400ULL, key, m});
          auto learner = make_learner(spec);
          learner->fit(trains.at(key));
          it = fitted.emplace(key, std::move(learner)).first;
        }
        slot.acc[c * cfg.models.size() + m] =
            it->second->accuracy(tests.at(conditions[c].test_cell));
      }
    }
  });

  for (std::size_t d_idx = 0; d_idx < sources.size(); ++d_idx) {
    for (int rep = 0; rep < reps; ++rep) {
      const Slot& slot = slots[d_idx * static_cast<std::size_t>(reps) +
                               static_cast<std::size_t>(rep)];
      for (std::size_t c = 0; c < conditions.size(); ++c)
        for (std::size_t m = 0; m < cfg.models.size(); ++m) {
          ResultRow row;
          row.dataset = sources[d_idx].name;
          row.model = cfg.models[m].substr(0, cfg.models[m].find(':'));
          row.condition = conditions[c].condition;
          row.rep = rep;
          row.accuracy = slot.acc[c * cfg.models.size() + m];
          table.rows.push_back(std::move(row));
        }
    }
  }
  return table;
}

PairTest make_pair_test(const ResultTable& table, const std::string& dataset,
                        const std::string& model, const std::string& a, const std::string& b) {
  PairTest t;
  t.dataset = dataset;
  t.model = model;
  t.condition_a = a;
  t.condition_b = b;
  const auto xa = table.accuracies(dataset, model, a);
  const auto xb = table.accuracies(dataset, model, b);
  t.mean_a = mean_of(xa);
  t.mean_b = mean_of(xb);
  t.welch = welch_t_test(xa, xb);
  t.significant = t.welch.p < 0.001;
  return t;
}

void attach_tests(ResultTable& table,
                  const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> datasets, models;
  for (const ResultRow& r : table.rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
      datasets.push_back(r.dataset);
    if (std::find(models.begin(), models.end(), r.model) == models.end())
      models.push_back(r.model);
  }
  for (const std::string& d : datasets)
    for (const std::string& m : models)
      for (const auto& [a, b] : pairs) table.tests.push_back(make_pair_test(table, d, m, a, b));
}

}  // namespace

std::map<std::string, Aggregate> ResultTable::aggregates() const {
  std::map<std::string, std::vector<double>> groups;
  for (const ResultRow& r : rows)
    groups[r.dataset + "|" + r.model + "|" + r.condition].push_back(r.accuracy);
  std::map<std::string, Aggregate> out;
  for (const auto& [key, xs] : groups) {
    Aggregate a;
    a.n = xs.size();
    a.mean = mean_of(xs);
    a.stddev = xs.size() > 1 ? std::sqrt(sample_variance(xs)) : 0.0;
    out[key] = a;
  }
  return out;
}

Aggregate ResultTable::aggregate(const std::string& dataset, const std::string& model,
                                 const std::string& condition) const {
  const auto xs = accuracies(dataset, model, condition);
  if (xs.empty()) throw std::invalid_argument("no rows for " + dataset + "/" + model + "/" +
                                              condition);
  Aggregate a;
  a.n = xs.size();
  a.mean = mean_of(xs);
  a.stddev = xs.size() > 1 ? std::sqrt(sample_variance(xs)) : 0.0;
  return a;
}

std::vector<double> ResultTable::accuracies(const std::string& dataset, const std::string& model,
                                            const std::string& condition) const {
  std::vector<double> xs;
  for (const ResultRow& r : rows)
    if (r.dataset == dataset && r.model == model && r.condition == condition)
      xs.push_back(r.accuracy);
  return xs;
}

ResultTable cmd_drift_types(const ExperimentConfig& cfg) {
  const std::vector<RunSpec> conditions = {{"none", {{0, 0}}, {0, 0}},
                                           {"real", {{0, 0}}, {0, 1}},
                                           {"virtual", {{0, 0}}, {1, 0}},
                                           {"both", {{0, 0}}, {1, 1}}};
  ResultTable table = run_grid(cfg, conditions, "drift-types");
  attach_tests(table, {{"none", "real"}, {"none", "virtual"}, {"virtual", "both"}});
  return table;
}

ResultTable cmd_composed(const ExperimentConfig& cfg) {
  const std::vector<RunSpec> conditions = {{"none", {{0, 0}}, {0, 0}},
                                           {"composed-real", {{0, 0}, {0, 1}}, {0, 0}},
                                           {"composed-virtual", {{0, 0}, {1, 0}}, {0, 0}},
                                           {"single-real", {{0, 1}}, {0, 0}},
                                           {"single-virtual", {{1, 0}}, {0, 0}}};
  ResultTable table = run_grid(cfg, conditions, "composed");
  attach_tests(table, {{"none", "composed-real"},
                       {"none", "composed-virtual"},
                       {"composed-real", "single-real"},
                       {"composed-virtual", "single-virtual"}});
  return table;
}

std::vector<UsageRow> cmd_usage_metric(const ResultTable& drift_types,
                                       const ResultTable& composed) {
  std::vector<UsageRow> out;
  std::vector<std::pair<std::string, std::string>> keys;
  for (const ResultRow& r : composed.rows) {
    if (r.condition != "composed-virtual") continue;
    const auto key = std::make_pair(r.dataset, r.model);
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  for (const auto& [dataset, model] : keys) {
    UsageRow row;
    row.dataset = dataset;
    row.model = model;
    row.none = drift_types.aggregate(dataset, model, "none").mean;
    row.virt = drift_types.aggregate(dataset, model, "virtual").mean;
    row.composed = composed.aggregate(dataset, model, "composed-virtual").mean;
    if (std::abs(row.none - row.composed) >= 1e-6)
      row.metric = std::abs((row.composed - row.virt) / (row.none - row.composed));
    out.push_back(row);
  }
  return out;
}

namespace {

void csv_row(std::ostream* csv, const std::string& id, const std::string& arrow,
             const std::string& expected, const std::string& observed, bool pass) {
  if (!csv) return;
  (*csv) << id << "," << arrow << "," << expected << "," << observed << ","
         << (pass ? "1" : "0") << "\n";
}

}  // namespace

TheorySuiteStats run_fixture_suite(const McParams& mc, std::ostream* csv) {
  TheorySuiteStats stats;
  for (FixtureId id : all_fixture_ids()) {
    const Fixture f = make_fixture(id);
    ++stats.instances;
    const auto problems = fixture_mismatches(f);
    csv_row(csv, f.name, "report", "exact", problems.empty() ? "exact" : problems.front(),
            problems.empty());
    stats.fixture_mismatches += problems.size();
  }

  // CE2: consistent ERM suffers A-drift at the oracle constant, the constant
  // (inconsistent) learner does not.
  {
    const Fixture f = make_fixture(FixtureId::CE2);
    const auto erm = erm_learner(f.cls, f.loss, true);
    const auto r_erm = check_A_drift_mc(f.process, erm, f.loss, f.w1, f.w2, mc.n1, mc.n2,
                                        1.0 / 9.0, mc.trials, mc.seed);
    const bool erm_ok = r_erm.estimate >= mc.hi;
    csv_row(csv, "CE2", "erm-A-drift", ">=0.95", fmt(r_erm.estimate, "%.3f"), erm_ok);
    const auto r_bad = check_A_drift_mc(f.process, ce2_inconsistent_learner(), f.loss, f.w1,
                                        f.w2, mc.n1, mc.n2, 1.0 / 9.0, mc.trials, mc.seed);
    const bool bad_ok = r_bad.estimate == 0.0;
    csv_row(csv, "CE2", "inconsistent-no-A-drift", "0", fmt(r_bad.estimate, "%.3f"), bad_ok);
    if (!erm_ok) ++stats.other_arrow_failures;
    if (!bad_ok) ++stats.other_arrow_failures;
  }

  // CE3: the case learner exhibits A-drift although there is no weak drift.
  {
    const Fixture f = make_fixture(FixtureId::CE3);
    const auto r = check_A_drift_mc(f.process, ce3_inconsistent_learner(), f.loss, f.w1, f.w2,
                                    mc.n1, mc.n2, 0.1, mc.trials, mc.seed);
    const bool ok = r.estimate >= mc.hi;
    csv_row(csv, "CE3", "inconsistent-A-drift", ">=0.95", fmt(r.estimate, "%.3f"), ok);
    if (!ok) ++stats.other_arrow_failures;
    const auto weak = check_weak_H(f.process, f.cls, f.loss, f.w1, f.w2);
    csv_row(csv, "CE3", "no-weak-drift", "false", weak.drift ? "true" : "false", !weak.drift);
    if (weak.drift) ++stats.other_arrow_failures;
  }

  // XOR: model drift without real drift.
  {
    const Fixture f = make_fixture(FixtureId::XOR);
    const bool real = has_real_drift(f.process, f.w1, f.w2);
    csv_row(csv, "XOR", "no-real-drift", "false", real ? "true" : "false", !real);
    if (real) ++stats.other_arrow_failures;
  }
  return stats;
}

TheorySuiteStats run_random_suite(std::size_t n, std::uint64_t seed, const McParams& mc,
                                  bool with_mc, int threads, std::ostream* csv) {
  struct PerInstance {
    TheorySuiteStats stats;
    std::string rows;
  };
  std::vector<PerInstance> parts(n);

  parallel_for_index(n, threads, [&](std::size_t i) {
    PerInstance& part = parts[i];
    const std::uint64_t inst_seed = Rng::derive({seed, 0x726E6400ULL, i});
    const RandomInstance inst = make_random_instance(inst_seed);
    Figure2Params params;
    params.mc = mc;
    params.mc.seed = Rng::derive({inst_seed, 17});
    const DriftReport probe =
        compute_drift_report(inst.process, inst.cls, Loss::ZeroOne, inst.w1, inst.w2);
    params.run_mc =
        with_mc && (probe.strong.drift || probe.relation == LossRelation::Constant);
    const Figure2Result res =
        verify_figure2(inst.process, inst.cls, Loss::ZeroOne, inst.w1, inst.w2, params);

    TheorySuiteStats& s = part.stats;
    s.instances = 1;
    std::ostringstream rows;
    const std::string id = "rnd-" + std::to_string(i);
    for (const ArrowCheck& a : res.arrows) {
      if (a.status == ArrowStatus::NotApplicable) continue;
      const bool pass = a.status == ArrowStatus::Pass;
      rows << id << "," << a.arrow << ",pass," << (pass ? "pass" : "FAIL") << ","
           << (pass ? "1" : "0") << "\n";
      if (a.arrow == "strong->weak") s.strong_weak_failures += !pass;
      else if (a.arrow == "weak+uniq->strong") s.weak_uniq_failures += !pass;
      else if (a.arrow.rfind("nondecr", 0) == 0 || a.arrow.rfind("nonincr", 0) == 0)
        s.lemma33_failures += !pass;
      else if (a.arrow == "risk-bound") s.bound_failures += !pass;
      else if (a.arrow == "strong->A") {
        s.strong_instances = 1;  // applicable: strong drift with certified n
        s.strong_mc_fired = pass;
      } else if (a.arrow == "A->weak") {
        s.a_fired = 1;
        s.a_fired_weak = pass;
      } else if (a.arrow == "const:A<->ell*") {
        s.const_applicable = 1;  // applicable: constant loss with certified n
        s.const_star_agree = pass;
        const bool hi = res.mc_A >= mc.hi, lo = res.mc_A <= mc.lo;
        if ((res.report.ell_12.drift && hi) || (!res.report.ell_12.drift && lo))
          s.const_plain_agree = 1;
      } else {
        s.other_arrow_failures += !pass;
      }
    }
    if (params.run_mc && res.mc_A >= 0.0) s.mc_run = 1;
    part.rows = rows.str();
  });

  TheorySuiteStats total;
  for (const PerInstance& p : parts) {
    const TheorySuiteStats& s = p.stats;
    total.instances += s.instances;
    total.strong_weak_failures += s.strong_weak_failures;
    total.weak_uniq_failures += s.weak_uniq_failures;
    total.lemma33_failures += s.lemma33_failures;
    total.bound_failures += s.bound_failures;
    total.other_arrow_failures += s.other_arrow_failures;
    total.mc_run += s.mc_run;
    total.strong_instances += s.strong_instances;
    total.strong_mc_fired += s.strong_mc_fired;
    total.a_fired += s.a_fired;
    total.a_fired_weak += s.a_fired_weak;
    total.const_applicable += s.const_applicable;
    total.const_star_agree += s.const_star_agree;
    total.const_plain_agree += s.const_plain_agree;
    if (csv) (*csv) << p.rows;
  }
  return total;
}

std::size_t run_universal_mse_suite(std::size_t n, std::uint64_t seed, int threads) {
  std::vector<unsigned char> disagree(n, 0);
  parallel_for_index(n, threads, [&](std::size_t i) {
    const RandomInstance inst = make_random_instance(Rng::derive({seed, 0x756E6976ULL, i}));
    const bool real = has_real_drift(inst.process, inst.w1, inst.w2);
    const auto strong = check_strong_H_universal_mse(inst.process, inst.w1, inst.w2);
    disagree[i] = real != strong.drift ? 1 : 0;
  });
  std::size_t total = 0;
  for (unsigned char d : disagree) total += d;
  return total;
}

void emit_rows_csv(const ResultTable& table, std::ostream& out) {
  if (table.rows.empty()) throw std::invalid_argument("refusing to emit an empty table");
  out << "dataset,model,condition,rep,accuracy\n";
  for (const ResultRow& r : table.rows)
    out << r.dataset << "," << r.model << "," << r.condition << "," << r.rep << ","
        << fmt(r.accuracy) << "\n";
}

void emit_tests_csv(const std::vector<PairTest>& tests, std::ostream& out) {
  out << "dataset,model,condition_a,condition_b,mean_a,mean_b,t,dof,p,significant,family\n";
  for (const PairTest& t : tests)
    out << t.dataset << "," << t.model << "," << t.condition_a << "," << t.condition_b << ","
        << fmt(t.mean_a) << "," << fmt(t.mean_b) << "," << fmt(t.welch.t) << ","
        << fmt(t.welch.dof) << "," << fmt(t.welch.p) << "," << (t.significant ? "1" : "0")
        << ",welch-unpaired-two-sided-uncorrected\n";
}

void emit_usage_csv(const std::vector<UsageRow>& rows, std::ostream& out) {
  out << "dataset,model,none,virtual,composed_virtual,metric\n";
  for (const UsageRow& r : rows) {
    out << r.dataset << "," << r.model << "," << fmt(r.none) << "," << fmt(r.virt) << ","
        << fmt(r.composed) << ",";
    out << (r.metric ? fmt(*r.metric) : std::string("undefined")) << "\n";
  }
}

namespace {

const char* kMarkerShapes[] = {"circle", "square", "diamond", "triangle"};
const char* kModelColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

double map_coord(double v, double lo, double hi, double px_lo, double px_hi) {
  return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo);
}

void svg_marker(std::ostringstream& out, const std::string& shape, double x, double y,
                const std::string& color) {
  auto f2 = [](double v) { return fmt(v, "%.2f"); };
  if (shape == "circle") {
    out << "<circle cx=\"" << f2(x) << "\" cy=\"" << f2(y) << "\" r=\"4\" fill=\"" << color
        << "\"/>\n";
  } else if (shape == "square") {
    out << "<rect x=\"" << f2(x - 3.5) << "\" y=\"" << f2(y - 3.5)
        << "\" width=\"7\" height=\"7\" fill=\"" << color << "\"/>\n";
  } else if (shape == "diamond") {
    out << "<path d=\"M" << f2(x) << " " << f2(y - 5) << " L" << f2(x + 5) << " " << f2(y)
        << " L" << f2(x) << " " << f2(y + 5) << " L" << f2(x - 5) << " " << f2(y)
        << " Z\" fill=\"" << color << "\"/>\n";
  } else {
    out << "<path d=\"M" << f2(x) << " " << f2(y - 5) << " L" << f2(x + 4.5) << " "
        << f2(y + 4) << " L" << f2(x - 4.5) << " " << f2(y + 4) << " Z\" fill=\"" << color
        << "\"/>\n";
  }
}

}  // namespace

std::string svg_scatter(const ResultTable& table, const std::string& cond_x,
                        const std::string& cond_y) {
  if (table.rows.empty()) throw std::invalid_argument("refusing to plot an empty table");
  std::vector<std::string> datasets, models;
  for (const ResultRow& r : table.rows) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset) == datasets.end())
      datasets.push_back(r.dataset);
    if (std::find(models.begin(), models.end(), r.model) == models.end())
      models.push_back(r.model);
  }

  const double W = 560, H = 480;
  const double L = 70, R = 430, T = 40, B = 400;  // plot box
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << B
      << "\" stroke=\"black\"/>\n";
  // diagonal y = x reference
  out << "<line x1=\"" << L << "\" y1=\"" << B << "\" x2=\"" << R << "\" y2=\"" << T
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = 0.25 * tick;
    const double x = map_coord(v, 0, 1, L, R);
    const double y = map_coord(v, 0, 1, B, T);
    out << "<line x1=\"" << fmt(x, "%.2f") << "\" y1=\"" << B << "\" x2=\"" << fmt(x, "%.2f")
        << "\" y2=\"" << B + 5 << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << fmt(x, "%.2f") << "\" y=\"" << B + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << fmt(v, "%.2f") << "</text>\n";
    out << "<line x1=\"" << L - 5 << "\" y1=\"" << fmt(y, "%.2f") << "\" x2=\"" << L
        << "\" y2=\"" << fmt(y, "%.2f") << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << fmt(y + 4, "%.2f")
        << "\" font-size=\"11\" text-anchor=\"end\">" << fmt(v, "%.2f") << "</text>\n";
  }
  out << "<text x=\"" << (L + R) / 2 << "\" y=\"" << B + 38
      << "\" font-size=\"13\" text-anchor=\"middle\">accuracy (" << cond_x << ")</text>\n";
  out << "<text x=\"18\" y=\"" << (T + B) / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << (T + B) / 2 << ")\">accuracy (" << cond_y << ")</text>\n";

  for (std::size_t d = 0; d < datasets.size(); ++d) {
    for (std::size_t m = 0; m < models.size(); ++m) {
      const auto ax = table.aggregate(datasets[d], models[m], cond_x);
      const auto ay = table.aggregate(datasets[d], models[m], cond_y);
      const double px = map_coord(ax.mean, 0, 1, L, R);
      const double py = map_coord(ay.mean, 0, 1, B, T);
      const double ex = (R - L) * ax.stddev / 2.0;  // half std, per the figure caption
      const double ey = (B - T) * ay.stddev / 2.0;
      const std::string color = kModelColors[m % 8];
      out << "<line x1=\"" << fmt(px - ex, "%.2f") << "\" y1=\"" << fmt(py, "%.2f")
          << "\" x2=\"" << fmt(px + ex, "%.2f") << "\" y2=\"" << fmt(py, "%.2f")
          << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
      out << "<line x1=\"" << fmt(px, "%.2f") << "\" y1=\"" << fmt(py - ey, "%.2f")
          << "\" x2=\"" << fmt(px, "%.2f") << "\" y2=\"" << fmt(py + ey, "%.2f")
          << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n";
      svg_marker(out, kMarkerShapes[d % 4], px, py, color);
    }
  }
  // legend
  double ly = T;
  for (std::size_t m = 0; m < models.size(); ++m, ly += 16) {
    out << "<rect x=\"" << R + 16 << "\" y=\"" << fmt(ly - 8, "%.2f")
        << "\" width=\"10\" height=\"10\" fill=\"" << kModelColors[m % 8] << "\"/>\n";
    out << "<text x=\"" << R + 30 << "\" y=\"" << fmt(ly + 1, "%.2f") << "\" font-size=\"11\">"
        << models[m] << "</text>\n";
  }
  ly += 8;
  for (std::size_t d = 0; d < datasets.size(); ++d, ly += 16) {
    svg_marker(out, kMarkerShapes[d % 4], R + 21, ly - 3, "#444444");
    out << "<text x=\"" << R + 30 << "\" y=\"" << fmt(ly + 1, "%.2f") << "\" font-size=\"11\">"
        << datasets[d] << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_experiment_outputs(const ResultTable& table, const std::string& dir,
                              const std::vector<std::pair<std::string, std::string>>& svg_pairs) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir + "/" + table.experiment + ".csv");
    if (!out) throw std::runtime_error("cannot write under " + dir);
    emit_rows_csv(table, out);
  }
  {
    std::ofstream out(dir + "/tests.csv", std::ios::app);
    emit_tests_csv(table.tests, out);
  }
  bool first = true;
  for (const auto& [cx, cy] : svg_pairs) {
    const std::string name = first ? table.experiment + ".svg"
                                   : table.experiment + "_" + cx + "_vs_" + cy + ".svg";
    first = false;
    std::ofstream out(dir + "/" + name);
    out << svg_scatter(table, cx, cy);
  }
}

}  // namespace driftlab
