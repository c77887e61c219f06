#pragma once

#include <iosfwd>
#include <random>

#include "pmevo/core.hpp"

namespace pmevo {

struct Individual {
  PortMapping3 mapping;
  double d_avg = 0.0;
  std::int64_t volume = 0;
};

struct EvoConfig {
  int population_size = 1000;
  int max_iterations = 200;
  std::uint64_t rng_seed = 0;
  double convergence_epsilon = 0.0;
  std::int64_t hill_climb_budget = 20000;
  int num_threads = 1;
  // Optional progress sink (one line per iteration).
  std::ostream *progress = nullptr;
};

// Average relative prediction error of the mapping over the set.
double average_relative_error(const PortMapping3 &m,
                              const MeasurementSet &train);

// Random mapping: per instruction, 1..|P| distinct micro-ops, each with
// multiplicity in [1, ceil(tp(i) * |u|)].
PortMapping3 init_random(const std::vector<InstructionId> &isa,
                         const std::map<InstructionId, double> &singleton_tp,
                         int num_ports, std::mt19937_64 &rng);

// Per instruction, the pooled micro-op occurrences of both parents are
// split randomly between two children; a child left empty for an
// instruction is repaired with one occurrence from the pool.
std::pair<PortMapping3, PortMapping3>
recombine(const PortMapping3 &a, const PortMapping3 &b, std::mt19937_64 &rng);

// Affine normalization of both objectives to [0, 1000] over the
// population, summed; degenerate (max == min) objectives map to 0.
std::vector<double> fitness_scalarize(const std::vector<Individual> &pop);

// Greedy hill climbing on edge multiplicities; accepts a step iff it
// strictly lowers (D_avg, V) lexicographically.
Individual local_search(const Individual &ind, const MeasurementSet &train,
                        std::int64_t budget);

PortMapping3 evolve(const MeasurementSet &train,
                    const std::vector<InstructionId> &isa, int num_ports,
                    const EvoConfig &cfg);

} // namespace pmevo
