#pragma once

#include <random>

#include "pmevo/core.hpp"

namespace pmevo {

struct LengthMismatch : Error {
  LengthMismatch() : Error("input vectors have different lengths") {}
};

struct DegenerateVariance : Error {
  DegenerateVariance() : Error("zero variance input for correlation") {}
};

// Per-experiment model throughput, order preserved.
std::vector<std::pair<Experiment, double>>
predict(const PortMapping3 &m, const std::vector<Experiment> &experiments);

// Mean absolute percentage error as a fraction.
double mape(const std::vector<double> &pred, const std::vector<double> &meas);

double pearson(const std::vector<double> &xs, const std::vector<double> &ys);

// Pearson correlation of ranks; ties get average ranks.
double spearman(const std::vector<double> &xs, const std::vector<double> &ys);

// Random instruction multisets of the given size, sampled by i.i.d.
// draws with replacement.
std::vector<Experiment> gen_benchmark(const std::vector<InstructionId> &isa,
                                      int size, int count,
                                      std::mt19937_64 &rng);

// bins x bins counts over [0, max(pred, meas)]^2; row indexes measured,
// column indexes predicted; upper-edge points land in the last bin.
std::vector<std::vector<std::int64_t>>
heatmap_bins(const std::vector<double> &pred, const std::vector<double> &meas,
             int bins);

} // namespace pmevo
