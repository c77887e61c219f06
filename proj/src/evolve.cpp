#include "pmevo/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "pmevo/expgen.hpp"

namespace pmevo {

namespace {

struct CompiledTrain {
  int num_ports = 0;
  std::vector<InstructionId> isa;
  std::map<InstructionId, int> index;
  // Per experiment: (instruction index, count) pairs and measured cycles.
  std::vector<std::vector<std::pair<int, std::int64_t>>> exps;
  std::vector<double> cycles;
};

// Mapping flattened to per-instruction-index (port mask, n) edges.
using CompiledMapping = std::vector<std::vector<std::pair<PortMask, std::int64_t>>>;

CompiledTrain compile_train(const MeasurementSet &train,
                            const std::vector<InstructionId> &isa,
                            int num_ports) {
  CompiledTrain ct;
  ct.num_ports = num_ports;
  ct.isa = isa;
  for (std::size_t i = 0; i < isa.size(); ++i)
    ct.index[isa[i]] = static_cast<int>(i);
  for (const auto &entry : train.entries) {
    std::vector<std::pair<int, std::int64_t>> exp;
    for (const auto &[insn, count] : entry.experiment.counts) {
      auto it = ct.index.find(insn);
      if (it == ct.index.end())
        throw UnmappedInstruction(insn);
      exp.emplace_back(it->second, count);
    }
    ct.exps.push_back(std::move(exp));
    ct.cycles.push_back(entry.cycles);
  }
  return ct;
}

CompiledMapping compile_mapping(const PortMapping3 &m, const CompiledTrain &ct) {
  CompiledMapping cm(ct.isa.size());
  for (std::size_t i = 0; i < ct.isa.size(); ++i) {
    const auto &edges = m.edges(ct.isa[i]);
    cm[i].assign(edges.begin(), edges.end());
  }
  return cm;
}

// Bottleneck throughput of one compiled experiment; the hot loop of
// fitness evaluation.
double compiled_throughput(const CompiledMapping &cm, const CompiledTrain &ct,
                           const std::vector<std::pair<int, std::int64_t>> &exp) {
  // Micro-op masses for this experiment (masks may repeat; summing over
  // all entries with mask subset of Q handles that).
  std::vector<std::pair<PortMask, std::int64_t>> items;
  for (const auto &[idx, count] : exp)
    for (const auto &[mask, n] : cm[idx])
      items.emplace_back(mask, count * n);

  std::int64_t best_num = 0;
  int best_size = 1;
  const PortMask full = (PortMask{1} << ct.num_ports) - 1;
  for (PortMask q = 1; q <= full; ++q) {
    std::int64_t num = 0;
    for (const auto &[mask, mass] : items)
      if ((mask & ~q) == 0)
        num += mass;
    const int size = port_count(q);
    if (num * best_size > best_num * size) {
      best_num = num;
      best_size = size;
    }
  }
  return static_cast<double>(best_num) / best_size;
}

double compiled_d_avg(const CompiledMapping &cm, const CompiledTrain &ct) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ct.exps.size(); ++i) {
    double predicted = compiled_throughput(cm, ct, ct.exps[i]);
    sum += std::abs(predicted - ct.cycles[i]) / ct.cycles[i];
  }
  return sum / static_cast<double>(ct.exps.size());
}

void evaluate(Individual &ind, const CompiledTrain &ct) {
  ind.d_avg = compiled_d_avg(compile_mapping(ind.mapping, ct), ct);
  ind.volume = ind.mapping.volume();
}

// Evaluates individuals [begin, end) with a static chunk split; results
// are written by index, so the outcome is thread-count independent.
void evaluate_range(std::vector<Individual> &pop, std::size_t begin,
                    std::size_t end, const CompiledTrain &ct, int threads) {
  const std::size_t count = end - begin;
  if (threads <= 1 || count < 2) {
    for (std::size_t i = begin; i < end; ++i)
      evaluate(pop[i], ct);
    return;
  }
  std::vector<std::thread> workers;
  const std::size_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    std::size_t lo = begin + t * chunk;
    std::size_t hi = std::min(end, lo + chunk);
    if (lo >= hi)
      break;
    workers.emplace_back([&pop, lo, hi, &ct] {
      for (std::size_t i = lo; i < hi; ++i)
        evaluate(pop[i], ct);
    });
  }
  for (auto &w : workers)
    w.join();
}

bool lex_better(const Individual &a, const Individual &b) {
  if (a.d_avg != b.d_avg)
    return a.d_avg < b.d_avg;
  return a.volume < b.volume;
}

Individual local_search_impl(Individual cur, const CompiledTrain &ct,
                             std::int64_t budget) {
  std::int64_t evals = 0;
  bool improved = true;
  while (improved && evals < budget) {
    improved = false;
    // Canonical sweep order: instruction name, then port mask.
    std::vector<std::pair<InstructionId, PortMask>> edges;
    for (const auto &[insn, insn_edges] : cur.mapping.assignment())
      for (const auto &[mask, n] : insn_edges)
        edges.emplace_back(insn, mask);

    for (const auto &[insn, mask] : edges) {
      if (evals >= budget)
        break;
      const auto &insn_edges = cur.mapping.assignment().at(insn);
      auto it = insn_edges.find(mask);
      if (it == insn_edges.end())
        continue; // removed earlier in this sweep
      const std::int64_t n = it->second;

      std::vector<std::int64_t> tries; // new n; 0 means remove the edge
      if (n > 1)
        tries.push_back(n - 1);
      else if (insn_edges.size() > 1)
        tries.push_back(0);
      tries.push_back(n + 1);

      for (std::int64_t new_n : tries) {
        if (evals >= budget)
          break;
        PortMapping3 cand_map(cur.mapping.num_ports());
        for (const auto &[ci, ci_edges] : cur.mapping.assignment())
          for (const auto &[cm, cn] : ci_edges) {
            std::int64_t v = (ci == insn && cm == mask) ? new_n : cn;
            if (v > 0)
              cand_map.add_edge(ci, cm, v);
          }
        Individual cand{std::move(cand_map), 0.0, 0};
        evaluate(cand, ct);
        ++evals;
        if (lex_better(cand, cur)) {
          cur = std::move(cand);
          improved = true;
          break;
        }
      }
    }
  }
  return cur;
}

} // namespace

struct EmptyTrainingSet : Error {
  EmptyTrainingSet() : Error("training set is empty") {}
};

struct MismatchedConfig : Error {
  MismatchedConfig() : Error("parents have different ISA coverage or ports") {}
};

double average_relative_error(const PortMapping3 &m,
                              const MeasurementSet &train) {
  if (train.entries.empty())
    throw EmptyTrainingSet();
  std::vector<InstructionId> isa;
  for (const auto &[insn, edges] : m.assignment())
    isa.push_back(insn);
  CompiledTrain ct = compile_train(train, isa, m.num_ports());
  return compiled_d_avg(compile_mapping(m, ct), ct);
}

PortMapping3 init_random(const std::vector<InstructionId> &isa,
                         const std::map<InstructionId, double> &singleton_tp,
                         int num_ports, std::mt19937_64 &rng) {
  const PortMask full = (PortMask{1} << num_ports) - 1;
  PortMapping3 m(num_ports);
  for (const auto &insn : isa) {
    auto tp_it = singleton_tp.find(insn);
    if (tp_it == singleton_tp.end())
      throw MissingThroughput(insn);
    const double tp = tp_it->second;

    std::uniform_int_distribution<int> k_dist(1, num_ports);
    const int k = k_dist(rng);
    std::vector<PortMask> chosen;
    std::uniform_int_distribution<PortMask> mask_dist(1, full);
    while (static_cast<int>(chosen.size()) < k) {
      PortMask mask = mask_dist(rng);
      if (std::find(chosen.begin(), chosen.end(), mask) == chosen.end())
        chosen.push_back(mask);
    }
    for (PortMask mask : chosen) {
      std::int64_t upper =
          std::max<std::int64_t>(1, guarded_ceil(tp * port_count(mask)));
      std::uniform_int_distribution<std::int64_t> n_dist(1, upper);
      m.add_edge(insn, mask, n_dist(rng));
    }
  }
  return m;
}

std::pair<PortMapping3, PortMapping3>
recombine(const PortMapping3 &a, const PortMapping3 &b, std::mt19937_64 &rng) {
  if (a.num_ports() != b.num_ports())
    throw MismatchedConfig();
  const auto &aa = a.assignment();
  const auto &ba = b.assignment();
  if (aa.size() != ba.size())
    throw MismatchedConfig();

  PortMapping3 c1(a.num_ports());
  PortMapping3 c2(a.num_ports());
  std::uniform_int_distribution<int> coin(0, 1);

  for (const auto &[insn, a_edges] : aa) {
    auto b_it = ba.find(insn);
    if (b_it == ba.end())
      throw MismatchedConfig();

    // Pool of unit micro-op occurrences of both parents.
    std::vector<PortMask> pool;
    for (const auto &[mask, n] : a_edges)
      pool.insert(pool.end(), n, mask);
    for (const auto &[mask, n] : b_it->second)
      pool.insert(pool.end(), n, mask);

    std::map<PortMask, std::int64_t> to1, to2;
    for (PortMask mask : pool) {
      if (coin(rng) == 0)
        ++to1[mask];
      else
        ++to2[mask];
    }
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    if (to1.empty())
      ++to1[pool[pick(rng)]];
    if (to2.empty())
      ++to2[pool[pick(rng)]];

    for (const auto &[mask, n] : to1)
      c1.add_edge(insn, mask, n);
    for (const auto &[mask, n] : to2)
      c2.add_edge(insn, mask, n);
  }
  return {std::move(c1), std::move(c2)};
}

std::vector<double> fitness_scalarize(const std::vector<Individual> &pop) {
  double d_min = 0.0, d_max = 0.0;
  std::int64_t v_min = 0, v_max = 0;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (i == 0 || pop[i].d_avg < d_min)
      d_min = pop[i].d_avg;
    if (i == 0 || pop[i].d_avg > d_max)
      d_max = pop[i].d_avg;
    if (i == 0 || pop[i].volume < v_min)
      v_min = pop[i].volume;
    if (i == 0 || pop[i].volume > v_max)
      v_max = pop[i].volume;
  }
  std::vector<double> fitness(pop.size(), 0.0);
  for (std::size_t i = 0; i < pop.size(); ++i) {
    double f = 0.0;
    if (d_max > d_min)
      f += 1000.0 * (pop[i].d_avg - d_min) / (d_max - d_min);
    if (v_max > v_min)
      f += 1000.0 * static_cast<double>(pop[i].volume - v_min) /
           static_cast<double>(v_max - v_min);
    fitness[i] = f;
  }
  return fitness;
}

Individual local_search(const Individual &ind, const MeasurementSet &train,
                        std::int64_t budget) {
  if (budget <= 0)
    return ind;
  std::vector<InstructionId> isa;
  for (const auto &[insn, edges] : ind.mapping.assignment())
    isa.push_back(insn);
  CompiledTrain ct = compile_train(train, isa, ind.mapping.num_ports());
  Individual start = ind;
  evaluate(start, ct);
  return local_search_impl(std::move(start), ct, budget);
}

PortMapping3 evolve(const MeasurementSet &train,
                    const std::vector<InstructionId> &isa, int num_ports,
                    const EvoConfig &cfg) {
  if (train.entries.empty())
    throw EmptyTrainingSet();
  if (cfg.population_size < 2)
    throw Error("population size must be >= 2");
  if (num_ports > kMaxPorts)
    throw PortCountExceeded(num_ports);

  CompiledTrain ct = compile_train(train, isa, num_ports);

  std::map<InstructionId, double> singleton_tp;
  for (const auto &entry : train.entries) {
    const auto &counts = entry.experiment.counts;
    if (counts.size() == 1 && counts.begin()->second == 1)
      singleton_tp[counts.begin()->first] = entry.cycles;
  }

  std::mt19937_64 rng(cfg.rng_seed);
  const std::size_t p = static_cast<std::size_t>(cfg.population_size);

  std::vector<Individual> pop;
  pop.reserve(2 * p);
  for (std::size_t i = 0; i < p; ++i)
    pop.push_back({init_random(isa, singleton_tp, num_ports, rng), 0.0, 0});
  evaluate_range(pop, 0, p, ct, cfg.num_threads);

  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    // Children from uniformly sampled parents (with replacement).
    std::uniform_int_distribution<std::size_t> parent(0, p - 1);
    std::vector<Individual> combined = pop;
    while (combined.size() < 2 * p) {
      auto [c1, c2] =
          recombine(pop[parent(rng)].mapping, pop[parent(rng)].mapping, rng);
      combined.push_back({std::move(c1), 0.0, 0});
      if (combined.size() < 2 * p)
        combined.push_back({std::move(c2), 0.0, 0});
    }
    evaluate_range(combined, p, combined.size(), ct, cfg.num_threads);

    const std::vector<double> fitness = fitness_scalarize(combined);
    std::vector<std::size_t> order(combined.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) {
                       if (fitness[x] != fitness[y])
                         return fitness[x] < fitness[y];
                       if (combined[x].volume != combined[y].volume)
                         return combined[x].volume < combined[y].volume;
                       return combined[x].d_avg < combined[y].d_avg;
                     });

    std::size_t lex_best = 0;
    for (std::size_t i = 1; i < combined.size(); ++i)
      if (lex_better(combined[i], combined[lex_best]))
        lex_best = i;

    std::vector<Individual> next;
    next.reserve(2 * p);
    bool lex_best_kept = false;
    for (std::size_t i = 0; i < p; ++i) {
      if (order[i] == lex_best)
        lex_best_kept = true;
      next.push_back(combined[order[i]]);
    }
    // The scalarized ranking may drop the individual with the lowest
    // (D_avg, V); keep it so the best error found never regresses.
    if (!lex_best_kept)
      next.back() = combined[lex_best];

    double f_min = fitness[order[0]];
    double f_max = f_min;
    for (std::size_t i = 0; i < p; ++i) {
      f_min = std::min(f_min, fitness[order[i]]);
      f_max = std::max(f_max, fitness[order[i]]);
    }

    pop = std::move(next);
    if (cfg.progress) {
      std::size_t pb = 0;
      for (std::size_t i = 1; i < pop.size(); ++i)
        if (lex_better(pop[i], pop[pb]))
          pb = i;
      (*cfg.progress) << "iter " << iter << " best_d_avg=" << pop[pb].d_avg
                      << " best_v=" << pop[pb].volume << "\n";
    }
    if (f_max - f_min <= cfg.convergence_epsilon)
      break;
  }

  std::size_t best_idx = 0;
  for (std::size_t i = 1; i < pop.size(); ++i)
    if (lex_better(pop[i], pop[best_idx]))
      best_idx = i;
  Individual best = local_search_impl(pop[best_idx], ct, cfg.hill_climb_budget);
  return best.mapping;
}

} // namespace pmevo
