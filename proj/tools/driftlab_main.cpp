#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "driftlab/engine.hpp"
#include "driftlab/experiments.hpp"
#include "driftlab/fixtures.hpp"

namespace dl = driftlab;

namespace {

// Expands `--config FILE` into the equivalent command-line arguments. The
// file holds plain key=value lines mirroring the long flags; `key=true`
// stands for a bare flag, '#' starts a comment.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] != "--config") continue;
    if (i + 1 >= args.size()) throw std::runtime_error("--config needs a file path");
    std::ifstream in(args[i + 1]);
    if (!in) throw std::runtime_error("cannot open config file: " + args[i + 1]);
    std::vector<std::string> extra;
    std::string line;
    while (std::getline(in, line)) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      const auto from = line.find_first_not_of(" \t\r");
      if (from == std::string::npos) continue;
      const auto to = line.find_last_not_of(" \t\r");
      line = line.substr(from, to - from + 1);
      const auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("config lines must be key=value: " + line);
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      extra.push_back("--" + key);
      if (value == "true") continue;
      std::istringstream values(value);  // space-separated values form lists
      std::string v;
      while (values >> v) extra.push_back(v);
    }
    args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
    args.insert(args.begin() + static_cast<long>(i), extra.begin(), extra.end());
    break;
  }
  return args;
}

void add_experiment_flags(CLI::App* cmd, dl::ExperimentConfig& cfg) {
  cmd->add_option("--datasets", cfg.datasets,
                  "generator specs or csv:data=..,schema=.. (repeat or space-separate)");
  cmd->add_option("--models", cfg.models, "learner specs, e.g. knn:k=5 rf:trees=10,depth=10");
  cmd->add_option("--reps", cfg.reps, "repetitions per condition");
  cmd->add_option("--train", cfg.train_size, "training sample size per window");
  cmd->add_option("--test", cfg.test_size, "test sample size");
  cmd->add_option("--table-rows", cfg.table_rows, "generated base table size");
  cmd->add_option("--segment-depth", cfg.segment_depth, "virtual-drift tree depth");
  cmd->add_option("--seed", cfg.seed, "master seed");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  cmd->add_flag("--full-scale", cfg.full_scale, "use the full 1000 repetitions");
  cmd->add_option("--config", "plain key=value file mirroring these flags")
      ->type_name("FILE");  // expanded before parsing; registered for --help
}

void print_tests(const std::vector<dl::PairTest>& tests) {
  for (const auto& t : tests) {
    std::printf("%-10s %-11s %-16s vs %-16s  %.4f vs %.4f  p=%.3g%s\n", t.dataset.c_str(),
                t.model.c_str(), t.condition_a.c_str(), t.condition_b.c_str(), t.mean_a,
                t.mean_b, t.welch.p, t.significant ? "  *" : "");
  }
}

int run_verify(bool fixtures, std::size_t random_n, std::uint64_t seed,
               const std::string& out_dir, const std::string& process_path,
               std::vector<std::size_t> w1, std::vector<std::size_t> w2, int threads) {
  std::ofstream csv;
  std::ostream* csv_out = nullptr;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    csv.open(out_dir + "/verdicts.csv");
    csv << "instance_id,arrow,expected,observed,pass\n";
    csv_out = &csv;
  }

  std::size_t failures = 0;

  if (!process_path.empty()) {
    std::ifstream in(process_path);
    if (!in) {
      std::cerr << "cannot open " << process_path << "\n";
      return 2;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const dl::DriftProcess process = dl::parse_process(buf.str());
    if (w1.empty() || w2.empty()) {
      std::cerr << "--process needs --w1 and --w2 timepoint lists\n";
      return 2;
    }
    const dl::TimeWindow tw1{w1}, tw2{w2};
    const auto cls = dl::threshold_grid(process);
    const auto rep = dl::compute_drift_report(process, cls, dl::Loss::ZeroOne, tw1, tw2);
    std::printf("threshold class of %zu hypotheses\n", cls.size());
    std::printf("strong H-model drift: %s (C_s = %.6g)\n", rep.strong.drift ? "yes" : "no",
                rep.strong.constant);
    std::printf("weak drift 1->2: %s   2->1: %s\n", rep.weak_12.drift ? "yes" : "no",
                rep.weak_21.drift ? "yes" : "no");
    std::printf("ell drift 1->2: %s (C = %.6g)   2->1: %s (C = %.6g)\n",
                rep.ell_12.drift ? "yes" : "no", rep.ell_12.constant,
                rep.ell_21.drift ? "yes" : "no", rep.ell_21.constant);
    std::printf("optimal loss: %.6g -> %.6g (%s), discrepancy %.6g\n", rep.min_loss_1,
                rep.min_loss_2, dl::relation_name(rep.relation).c_str(), rep.discrepancy);
    std::printf("real drift: %s\n",
                dl::has_real_drift(process, tw1, tw2) ? "yes" : "no");
    return 0;
  }

  dl::McParams mc;
  mc.seed = seed;
  if (fixtures) {
    const auto stats = dl::run_fixture_suite(mc, csv_out);
    failures += stats.total_failures();
    std::printf("fixtures: %zu instances, %zu mismatches\n", stats.instances,
                stats.total_failures());
  }
  if (random_n > 0) {
    const auto stats = dl::run_random_suite(random_n, seed, mc, true, threads, csv_out);
    std::printf("random suite: %zu instances\n", stats.instances);
    std::printf("  strong->weak violations:        %zu\n", stats.strong_weak_failures);
    std::printf("  weak+uniqueness->strong:        %zu\n", stats.weak_uniq_failures);
    std::printf("  monotone-loss lemma violations: %zu\n", stats.lemma33_failures);
    std::printf("  risk-bound violations:          %zu\n", stats.bound_failures);
    std::printf("  other arrow violations:         %zu\n", stats.other_arrow_failures);
    if (stats.mc_run > 0) {
      std::printf("  MC: %zu runs; strong fired %zu/%zu; A=>weak ok %zu/%zu\n", stats.mc_run,
                  stats.strong_mc_fired, stats.strong_instances, stats.a_fired_weak,
                  stats.a_fired);
      std::printf("  constant-loss agreement: %zu/%zu (trained-model), %zu/%zu (plain ell)\n",
                  stats.const_star_agree, stats.const_applicable, stats.const_plain_agree,
                  stats.const_applicable);
      if (stats.strong_mc_fired < stats.strong_instances)
        failures += stats.strong_instances - stats.strong_mc_fired;
      if (stats.a_fired_weak < stats.a_fired) failures += stats.a_fired - stats.a_fired_weak;
    }
    failures += stats.total_failures();
  }
  std::printf("verify-theory: %s\n", failures == 0 ? "PASS" : "FAIL");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> raw_args;
  try {
    raw_args = expand_config(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"driftlab: drift oracles, stream experiments, and theory checks"};
  app.require_subcommand(1);

  dl::ExperimentConfig cfg;

  auto* cmd_types = app.add_subcommand("drift-types", "train on D00, test across the 2x2 grid");
  add_experiment_flags(cmd_types, cfg);

  auto* cmd_comp = app.add_subcommand("composed", "composed training windows, tested on D00");
  add_experiment_flags(cmd_comp, cfg);

  auto* cmd_usage =
      app.add_subcommand("usage-metric", "additional-information metric |(c-v)/(n-c)|");
  add_experiment_flags(cmd_usage, cfg);

  auto* cmd_verify = app.add_subcommand("verify-theory", "fixture + random implication suites");
  cmd_verify->alias("verify");
  bool fixtures = false;
  std::size_t random_n = 0;
  std::uint64_t vseed = 42;
  std::string vout, process_path;
  std::vector<std::size_t> vw1, vw2;
  int vthreads = 0;
  cmd_verify->add_flag("--fixtures", fixtures, "run the appendix counterexamples");
  cmd_verify->add_option("--random", random_n, "number of random instances");
  cmd_verify->add_option("--seed", vseed, "suite seed");
  cmd_verify->add_option("--out", vout, "write verdicts.csv here");
  cmd_verify->add_option("--process", process_path, "analyze a drift process file");
  cmd_verify->add_option("--w1", vw1, "first window timepoints")->delimiter(',');
  cmd_verify->add_option("--w2", vw2, "second window timepoints")->delimiter(',');
  cmd_verify->add_option("--threads", vthreads, "worker threads");

  auto* cmd_demo = app.add_subcommand("stream-demo", "test-then-train run with a label switch");
  std::string gen = "sea:concept=1", model = "gnb", detector = "ddm", policy = "hybrid";
  std::size_t steps = 4000, switch_at = 2000, init = 200;
  std::uint64_t dseed = 1;
  std::string dout;
  bool reset_to_initial = false;
  cmd_demo->add_option("--gen", gen, "stream generator spec");
  cmd_demo->add_option("--model", model, "learner spec");
  cmd_demo->add_option("--detector", detector, "none | ddm | sliding:kappa=3,w=100");
  cmd_demo->add_option("--policy", policy, "passive | active | hybrid");
  cmd_demo->add_option("--steps", steps, "stream length");
  cmd_demo->add_option("--switch-at", switch_at, "label switch position");
  cmd_demo->add_option("--init", init, "warm-up length");
  cmd_demo->add_option("--seed", dseed, "stream seed");
  cmd_demo->add_option("--out", dout, "output directory");
  cmd_demo->add_flag("--reset", reset_to_initial,
                     "on detection, reset to the warm-up model instead of retraining");

  try {
    std::vector<const char*> argv2;
    for (const std::string& a : raw_args) argv2.push_back(a.c_str());
    app.parse(static_cast<int>(argv2.size()), argv2.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (app.got_subcommand(cmd_types)) {
      const auto table = dl::cmd_drift_types(cfg);
      print_tests(table.tests);
      if (!cfg.out_dir.empty())
        dl::write_experiment_outputs(table, cfg.out_dir,
                                     {{"none", "real"}, {"none", "virtual"}, {"virtual", "both"}});
      return 0;
    }
    if (app.got_subcommand(cmd_comp)) {
      const auto table = dl::cmd_composed(cfg);
      print_tests(table.tests);
      if (!cfg.out_dir.empty())
        dl::write_experiment_outputs(table, cfg.out_dir,
                                     {{"none", "composed-real"}, {"none", "composed-virtual"}});
      return 0;
    }
    if (app.got_subcommand(cmd_usage)) {
      const auto types = dl::cmd_drift_types(cfg);
      const auto comp = dl::cmd_composed(cfg);
      const auto usage = dl::cmd_usage_metric(types, comp);
      for (const auto& row : usage) {
        std::printf("%-10s %-11s n=%.4f v=%.4f c=%.4f  metric=", row.dataset.c_str(),
                    row.model.c_str(), row.none, row.virt, row.composed);
        if (row.metric) std::printf("%.4f\n", *row.metric);
        else std::printf("undefined\n");
      }
      if (!cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(cfg.out_dir + "/usage-metric.csv");
        dl::emit_usage_csv(usage, out);
        dl::write_experiment_outputs(types, cfg.out_dir,
                                     {{"none", "real"}, {"none", "virtual"}, {"virtual", "both"}});
        dl::write_experiment_outputs(comp, cfg.out_dir,
                                     {{"none", "composed-real"}, {"none", "composed-virtual"}});
      }
      return 0;
    }
    if (app.got_subcommand(cmd_verify))
      return run_verify(fixtures, random_n, vseed, vout, process_path, vw1, vw2, vthreads);
    if (app.got_subcommand(cmd_demo)) {
      auto gcfg = dl::parse_generator(gen);
      gcfg.seed = dl::Rng::derive({dseed, 0x64656D6FULL});
      auto table = dl::generate(gcfg, std::max<std::size_t>(steps * 2, 2000));
      table = dl::binarize(table, dl::Rng::derive({dseed, 1}));
      const auto scen = dl::build_2x2(table, 3, dl::Rng::derive({dseed, 2}));
      if (switch_at == 0 || switch_at >= steps) switch_at = steps / 2;
      const auto src = dl::concat_stream(
          {scen.sample(0, 0, switch_at, dl::Rng::derive({dseed, 3})),
           scen.sample(0, 1, steps - switch_at, dl::Rng::derive({dseed, 4}))});
      dl::EngineConfig ecfg;
      ecfg.policy = dl::parse_policy(policy);
      ecfg.init = init;
      ecfg.seed = dseed;
      ecfg.reset_to_initial = reset_to_initial;
      const auto log =
          dl::run_stream(src, dl::parse_learner_spec(model), dl::parse_detector(detector), ecfg);
      std::cout << dl::stream_summary_json(log);
      if (!dout.empty()) {
        std::filesystem::create_directories(dout);
        std::ofstream csv(dout + "/stream-demo.csv");
        csv << dl::stream_csv(log);
        std::ofstream summary(dout + "/stream-demo.json");
        summary << dl::stream_summary_json(log);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
