#pragma once

#include "pmevo/core.hpp"

namespace pmevo {

// Simulated stand-in for hardware measurement: throughput of each
// experiment under a hidden ground-truth mapping, optionally perturbed
// by multiplicative Gaussian noise clamped at 3 sigma.
struct SimulatedProcessor {
  PortMapping3 ground_truth;
  double noise_rel_stddev = 0.0;
  std::uint64_t rng_seed = 0;
};

// One draw per experiment, in input order, from the seeded generator.
// With zero noise the exact model throughput is returned.
MeasurementSet measure(const SimulatedProcessor &proc,
                       const std::vector<Experiment> &experiments);

MeasurementSet import_measurements(const std::string &path);

} // namespace pmevo
