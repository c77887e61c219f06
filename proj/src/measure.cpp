#include "pmevo/measure.hpp"

#include <algorithm>
#include <random>

#include "pmevo/simulate.hpp"

namespace pmevo {

MeasurementSet measure(const SimulatedProcessor &proc,
                       const std::vector<Experiment> &experiments) {
  if (!(proc.noise_rel_stddev >= 0.0) || proc.noise_rel_stddev >= 0.5)
    throw Error("noise_rel_stddev must be in [0, 0.5)");
  proc.ground_truth.validate();

  std::mt19937_64 rng(proc.rng_seed);
  std::normal_distribution<double> noise(0.0, proc.noise_rel_stddev);

  MeasurementSet out;
  out.entries.reserve(experiments.size());
  for (const auto &e : experiments) {
    double cycles = simulate(proc.ground_truth, e).throughput;
    if (proc.noise_rel_stddev > 0.0) {
      double delta = noise(rng);
      double bound = 3.0 * proc.noise_rel_stddev;
      delta = std::clamp(delta, -bound, bound);
      cycles *= 1.0 + delta;
    }
    out.entries.push_back({e, cycles});
  }
  return out;
}

MeasurementSet import_measurements(const std::string &path) {
  return measurements_from_json(read_file(path));
}

} // namespace pmevo
