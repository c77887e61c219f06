#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <cstdlib>
#include <iostream>
#include <random>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "pmevo/congruence.hpp"
#include "pmevo/core.hpp"
#include "pmevo/evaluate.hpp"
#include "pmevo/evolve.hpp"
#include "pmevo/expgen.hpp"
#include "pmevo/measure.hpp"
#include "pmevo/simulate.hpp"

namespace {

using namespace pmevo;
using nlohmann::json;

std::vector<InstructionId> load_isa(const std::string &path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error &ex) {
    throw ParseError(ex.what());
  }
  if (!doc.contains("instructions") || !doc["instructions"].is_array())
    throw ParseError("ISA file needs an instructions array");
  std::vector<InstructionId> isa;
  for (const auto &name : doc["instructions"]) {
    std::string s = name.get<std::string>();
    if (s.empty())
      throw ParseError("empty instruction name in ISA file");
    isa.push_back(std::move(s));
  }
  if (isa.empty())
    throw ParseError("ISA file lists no instructions");
  return isa;
}

std::uint64_t resolve_seed(const CLI::App *cmd, std::int64_t seed_flag) {
  if (cmd->count("--seed") > 0)
    return static_cast<std::uint64_t>(seed_flag);
  auto now = std::chrono::steady_clock::now().time_since_epoch().count();
  auto seed = static_cast<std::uint64_t>(now);
  std::cerr << "seed: " << seed << "\n";
  return seed;
}

int default_threads() {
  if (const char *env = std::getenv("PMEVO_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1)
      return n;
  }
  return 1;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

PortMapping3 random_ground_truth(const std::vector<InstructionId> &isa,
                                 int num_ports, int max_uops, int max_mult,
                                 std::mt19937_64 &rng) {
  const PortMask full = (PortMask{1} << num_ports) - 1;
  PortMapping3 m(num_ports);
  std::uniform_int_distribution<int> uop_count(1, max_uops);
  std::uniform_int_distribution<PortMask> mask_dist(1, full);
  std::uniform_int_distribution<int> mult(1, max_mult);
  for (const auto &insn : isa) {
    int k = uop_count(rng);
    std::vector<PortMask> chosen;
    while (static_cast<int>(chosen.size()) < k) {
      PortMask mask = mask_dist(rng);
      if (std::find(chosen.begin(), chosen.end(), mask) == chosen.end())
        chosen.push_back(mask);
    }
    for (PortMask mask : chosen)
      m.add_edge(insn, mask, mult(rng));
  }
  return m;
}

std::map<InstructionId, double> singleton_tps(const MeasurementSet &meas) {
  std::map<InstructionId, double> tp;
  for (const auto &entry : meas.entries) {
    const auto &counts = entry.experiment.counts;
    if (counts.size() == 1 && counts.begin()->second == 1)
      tp[counts.begin()->first] = entry.cycles;
  }
  return tp;
}

int run(int argc, char **argv) {
  CLI::App app{"port mapping inference from throughput measurements"};
  app.set_version_flag("--version", "pmevo 1.0.0");
  app.require_subcommand(1);

  // generate
  auto *gen = app.add_subcommand(
      "generate", "generate experiments for an ISA (singletons, pairs and, "
                  "given measurements, weighted pairs; or random multisets)");
  std::string gen_isa, gen_out, gen_meas;
  int gen_rand_size = 0, gen_rand_count = 0;
  std::int64_t gen_seed = 0;
  gen->add_option("--isa", gen_isa, "ISA description file")->required();
  gen->add_option("--out", gen_out, "output experiment file")->required();
  gen->add_option("--measurements", gen_meas,
                  "measurement file with singleton throughputs; enables the "
                  "weighted pair family");
  gen->add_option("--random-size", gen_rand_size,
                  "emit random multisets of this size instead");
  gen->add_option("--random-count", gen_rand_count,
                  "number of random multisets");
  gen->add_option("--seed", gen_seed, "RNG seed for random multisets");

  // synth-gt
  auto *synth = app.add_subcommand(
      "synth-gt", "emit a random ground-truth mapping for a synthetic ISA");
  int synth_insns = 12, synth_ports = 4, synth_max_uops = 2, synth_max_mult = 2;
  std::int64_t synth_seed = 0;
  std::string synth_out;
  synth->add_option("--insns", synth_insns, "number of instructions");
  synth->add_option("--ports", synth_ports, "number of ports");
  synth->add_option("--max-uops-per-insn", synth_max_uops,
                    "max distinct micro-ops per instruction");
  synth->add_option("--max-mult", synth_max_mult, "max edge multiplicity");
  synth->add_option("--seed", synth_seed, "RNG seed");
  synth->add_option("--out", synth_out, "output mapping file")->required();

  // measure
  auto *meas = app.add_subcommand(
      "measure", "simulated throughput measurement against a ground truth");
  std::string meas_mapping, meas_exps, meas_out;
  double meas_noise = 0.0;
  std::int64_t meas_seed = 0;
  meas->add_option("--mapping", meas_mapping, "ground-truth mapping file")
      ->required();
  meas->add_option("--experiments", meas_exps, "experiment file")->required();
  meas->add_option("--noise", meas_noise, "relative noise stddev");
  meas->add_option("--seed", meas_seed, "RNG seed");
  meas->add_option("--out", meas_out, "output measurement file")->required();

  // filter
  auto *filter = app.add_subcommand(
      "filter", "congruence-filter a measurement set to representatives");
  std::string filter_meas, filter_out, filter_classes;
  double filter_eps = 0.05;
  filter->add_option("--measurements", filter_meas, "measurement file")
      ->required();
  filter->add_option("--eps", filter_eps, "symmetric relative tolerance");
  filter->add_option("--out", filter_out, "filtered measurement file")
      ->required();
  filter->add_option("--classes", filter_classes, "congruence class file");

  // evolve
  auto *evo = app.add_subcommand(
      "evolve", "infer a port mapping from measurements");
  std::string evo_meas, evo_out;
  int evo_ports = 0, evo_pop = 1000, evo_iters = 200;
  int evo_threads = default_threads();
  std::int64_t evo_seed = 0, evo_hill = 20000;
  double evo_conv = 0.0;
  evo->add_option("--measurements", evo_meas, "training measurement file")
      ->required();
  evo->add_option("--ports", evo_ports, "number of ports")->required();
  evo->add_option("--pop", evo_pop, "population size");
  evo->add_option("--iters", evo_iters, "iteration limit");
  evo->add_option("--seed", evo_seed, "RNG seed");
  evo->add_option("--threads", evo_threads, "fitness evaluation threads");
  evo->add_option("--convergence-eps", evo_conv, "fitness spread for early stop");
  evo->add_option("--hill-climb-budget", evo_hill,
                  "evaluation budget for the hill-climbing post-pass");
  evo->add_option("--out", evo_out, "output mapping file")->required();

  // predict
  auto *pred = app.add_subcommand(
      "predict", "model throughput for a set of experiments");
  std::string pred_mapping, pred_exps, pred_out;
  pred->add_option("--mapping", pred_mapping, "mapping file")->required();
  pred->add_option("--experiments", pred_exps, "experiment file")->required();
  pred->add_option("--out", pred_out, "output measurement-format file")
      ->required();

  // evaluate
  auto *eval = app.add_subcommand(
      "evaluate", "score a mapping's predictions against measurements");
  std::string eval_mapping, eval_meas, eval_report, eval_heatmap;
  int eval_bins = 35;
  eval->add_option("--mapping", eval_mapping, "mapping file")->required();
  eval->add_option("--measurements", eval_meas, "measurement file")->required();
  eval->add_option("--report", eval_report, "per-experiment report CSV")
      ->required();
  eval->add_option("--heatmap", eval_heatmap, "binned heat-map CSV");
  eval->add_option("--bins", eval_bins, "heat-map bins per axis");

  // oracle-check
  auto *oracle = app.add_subcommand(
      "oracle-check", "compare the bottleneck simulator against the LP oracle "
                      "on random instances");
  int oracle_instances = 10000, oracle_ports = 8;
  int oracle_threads = default_threads();
  std::int64_t oracle_seed = 0;
  oracle->add_option("--instances", oracle_instances, "number of instances");
  oracle->add_option("--ports", oracle_ports, "number of ports");
  oracle->add_option("--seed", oracle_seed, "RNG seed");
  oracle->add_option("--threads", oracle_threads, "unused; accepted for "
                     "interface consistency");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  if (gen->parsed()) {
    auto isa = load_isa(gen_isa);
    std::vector<Experiment> exps;
    if (gen_rand_size > 0) {
      std::mt19937_64 rng(resolve_seed(gen, gen_seed));
      exps = gen_benchmark(isa, gen_rand_size, gen_rand_count, rng);
    } else {
      exps = gen_singletons(isa);
      if (isa.size() >= 2) {
        auto pairs = gen_pairs(isa);
        exps.insert(exps.end(), pairs.begin(), pairs.end());
      }
      if (!gen_meas.empty()) {
        auto tp = singleton_tps(import_measurements(gen_meas));
        auto weighted = gen_weighted_pairs(isa, tp);
        exps.insert(exps.end(), weighted.begin(), weighted.end());
      }
    }
    write_file(gen_out, experiments_to_json(exps));
    return 0;
  }

  if (synth->parsed()) {
    std::mt19937_64 rng(resolve_seed(synth, synth_seed));
    std::vector<InstructionId> isa;
    for (int i = 0; i < synth_insns; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "i%02d", i);
      isa.push_back(buf);
    }
    PortMapping3 gt = random_ground_truth(isa, synth_ports, synth_max_uops,
                                          synth_max_mult, rng);
    write_file(synth_out, mapping_to_json(gt));
    return 0;
  }

  if (meas->parsed()) {
    SimulatedProcessor proc{mapping_from_json(read_file(meas_mapping)),
                            meas_noise, resolve_seed(meas, meas_seed)};
    auto exps = experiments_from_json(read_file(meas_exps));
    write_file(meas_out, measurements_to_json(measure(proc, exps)));
    return 0;
  }

  if (filter->parsed()) {
    MeasurementSet all = import_measurements(filter_meas);
    std::set<InstructionId> names;
    for (const auto &entry : all.entries)
      for (const auto &[insn, count] : entry.experiment.counts)
        names.insert(insn);
    std::vector<InstructionId> isa(names.begin(), names.end());
    CongruencePartition part = partition(all, isa, filter_eps);
    for (const auto &[a, b] : part.missing_evidence)
      std::cerr << "warning: missing measurements to compare " << a << " and "
                << b << "; not merged\n";
    write_file(filter_out, measurements_to_json(project(all, part)));
    if (!filter_classes.empty()) {
      json classes = json::array();
      for (const auto &members : part.classes)
        classes.push_back(
            {{"representative", members.front()}, {"members", members}});
      write_file(filter_classes, json{{"classes", classes}}.dump(2) + "\n");
    }
    return 0;
  }

  if (evo->parsed()) {
    MeasurementSet train = import_measurements(evo_meas);
    std::set<InstructionId> names;
    for (const auto &entry : train.entries)
      for (const auto &[insn, count] : entry.experiment.counts)
        names.insert(insn);
    std::vector<InstructionId> isa(names.begin(), names.end());
    EvoConfig cfg;
    cfg.population_size = evo_pop;
    cfg.max_iterations = evo_iters;
    cfg.rng_seed = resolve_seed(evo, evo_seed);
    cfg.convergence_epsilon = evo_conv;
    cfg.hill_climb_budget = evo_hill;
    cfg.num_threads = evo_threads;
    cfg.progress = &std::cerr;
    PortMapping3 result = evolve(train, isa, evo_ports, cfg);
    write_file(evo_out, mapping_to_json(result));
    return 0;
  }

  if (pred->parsed()) {
    PortMapping3 m = mapping_from_json(read_file(pred_mapping));
    auto exps = experiments_from_json(read_file(pred_exps));
    MeasurementSet out;
    for (auto &[e, cycles] : predict(m, exps))
      out.entries.push_back({e, cycles});
    write_file(pred_out, measurements_to_json(out));
    return 0;
  }

  if (eval->parsed()) {
    PortMapping3 m = mapping_from_json(read_file(eval_mapping));
    MeasurementSet meas_set = import_measurements(eval_meas);
    std::vector<double> measured, predicted;
    for (const auto &entry : meas_set.entries) {
      measured.push_back(entry.cycles);
      predicted.push_back(simulate(m, entry.experiment).throughput);
    }
    std::string report = "experiment_index,measured,predicted,abs_pct_err\n";
    for (std::size_t i = 0; i < measured.size(); ++i) {
      double err = std::abs(predicted[i] - measured[i]) / measured[i];
      report += std::to_string(i) + "," + format_double(measured[i]) + "," +
                format_double(predicted[i]) + "," + format_double(err) + "\n";
    }
    double pcc = std::numeric_limits<double>::quiet_NaN();
    double scc = std::numeric_limits<double>::quiet_NaN();
    try {
      pcc = pearson(predicted, measured);
      scc = spearman(predicted, measured);
    } catch (const DegenerateVariance &) {
    }
    report += "# MAPE=" + format_double(mape(predicted, measured)) +
              " PCC=" + format_double(pcc) + " SCC=" + format_double(scc) +
              "\n";
    write_file(eval_report, report);
    if (!eval_heatmap.empty()) {
      auto grid = heatmap_bins(predicted, measured, eval_bins);
      std::string hm = "row,col,count\n";
      for (int r = 0; r < eval_bins; ++r)
        for (int c = 0; c < eval_bins; ++c)
          hm += std::to_string(r) + "," + std::to_string(c) + "," +
                std::to_string(grid[r][c]) + "\n";
      write_file(eval_heatmap, hm);
    }
    return 0;
  }

  if (oracle->parsed()) {
    if (oracle_ports < 1 || oracle_ports > kMaxPorts)
      throw Error("oracle-check ports must be in [1, 16]");
    std::mt19937_64 rng(resolve_seed(oracle, oracle_seed));
    const PortMask full = (PortMask{1} << oracle_ports) - 1;
    std::uniform_int_distribution<PortMask> mask_dist(1, full);
    std::uniform_int_distribution<int> item_count(1, 10);
    std::uniform_int_distribution<std::int64_t> mass_dist(1, 10);
    double max_dev = 0.0;
    for (int i = 0; i < oracle_instances; ++i) {
      PortMapping2 m2;
      m2.num_ports = oracle_ports;
      Experiment2 e2;
      int items = item_count(rng);
      for (int j = 0; j < items; ++j) {
        m2.allowed[j] = mask_dist(rng);
        e2.counts[j] = mass_dist(rng);
      }
      double fast = simulate_bottleneck(m2, e2).throughput;
      double ref = oracle_throughput(m2, e2);
      max_dev = std::max(max_dev, std::abs(fast - ref));
    }
    std::cout << "instances: " << oracle_instances
              << " max deviation: " << format_double(max_dev) << "\n";
    return max_dev <= 1e-6 ? 0 : 1;
  }

  return 2;
}

} // namespace

int main(int argc, char **argv) {
  try {
    return run(argc, argv);
  } catch (const pmevo::Error &ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception &ex) {
    std::cerr << "internal error: " << ex.what() << "\n";
    return 1;
  }
}
