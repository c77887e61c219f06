#include "pmevo/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pmevo/simulate.hpp"

namespace pmevo {

std::vector<std::pair<Experiment, double>>
predict(const PortMapping3 &m, const std::vector<Experiment> &experiments) {
  std::vector<std::pair<Experiment, double>> out;
  out.reserve(experiments.size());
  for (const auto &e : experiments)
    out.emplace_back(e, simulate(m, e).throughput);
  return out;
}

double mape(const std::vector<double> &pred, const std::vector<double> &meas) {
  if (pred.size() != meas.size())
    throw LengthMismatch();
  if (pred.empty())
    throw Error("mape needs at least one point");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (!(meas[i] > 0.0))
      throw Error("non-positive measurement in mape");
    sum += std::abs(pred[i] - meas[i]) / meas[i];
  }
  return sum / static_cast<double>(pred.size());
}

double pearson(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch();
  const std::size_t n = xs.size();
  if (n < 2)
    throw Error("pearson needs at least two points");
  double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx;
    double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateVariance();
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(const std::vector<double> &values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]])
      ++j;
    double rank = 0.5 * (i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k)
      ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

} // namespace

double spearman(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size())
    throw LengthMismatch();
  return pearson(average_ranks(xs), average_ranks(ys));
}

std::vector<Experiment> gen_benchmark(const std::vector<InstructionId> &isa,
                                      int size, int count,
                                      std::mt19937_64 &rng) {
  if (isa.empty())
    throw Error("benchmark generation needs a non-empty ISA");
  if (size < 1 || count < 1)
    throw Error("benchmark size and count must be positive");
  std::uniform_int_distribution<std::size_t> pick(0, isa.size() - 1);
  std::vector<Experiment> out;
  out.reserve(count);
  for (int c = 0; c < count; ++c) {
    Experiment e;
    for (int s = 0; s < size; ++s)
      ++e.counts[isa[pick(rng)]];
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<std::vector<std::int64_t>>
heatmap_bins(const std::vector<double> &pred, const std::vector<double> &meas,
             int bins) {
  if (pred.size() != meas.size())
    throw LengthMismatch();
  if (bins < 1)
    throw Error("bins must be positive");
  double top = 0.0;
  for (double v : pred)
    top = std::max(top, v);
  for (double v : meas)
    top = std::max(top, v);
  std::vector<std::vector<std::int64_t>> grid(
      bins, std::vector<std::int64_t>(bins, 0));
  auto bin_of = [&](double v) {
    if (top <= 0.0)
      return 0;
    int b = static_cast<int>(v / top * bins);
    return std::clamp(b, 0, bins - 1);
  };
  for (std::size_t i = 0; i < pred.size(); ++i)
    ++grid[bin_of(meas[i])][bin_of(pred[i])];
  return grid;
}

} // namespace pmevo
