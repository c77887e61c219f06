#include "pmevo/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pmevo {

bool tp_equal(double t1, double t2, double eps) {
  if (!(t1 > 0.0) || !(t2 > 0.0))
    throw Error("tp_equal requires positive throughputs");
  return std::abs(t1 - t2) / (std::abs(t1 + t2) / 2.0) < eps;
}

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;

  explicit UnionFind(std::size_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x)
      x = parent[x] = parent[parent[x]];
    return x;
  }

  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

} // namespace

CongruencePartition partition(const MeasurementSet &meas,
                              const std::vector<InstructionId> &isa,
                              double eps) {
  std::map<Experiment, double> lookup;
  for (const auto &entry : meas.entries)
    lookup[entry.experiment] = entry.cycles;

  auto singleton_tp = [&](const InstructionId &insn) -> const double * {
    auto it = lookup.find(Experiment{{{insn, 1}}});
    return it == lookup.end() ? nullptr : &it->second;
  };

  CongruencePartition result;
  UnionFind uf(isa.size());

  for (std::size_t a = 0; a < isa.size(); ++a) {
    for (std::size_t b = a + 1; b < isa.size(); ++b) {
      const InstructionId &ia = isa[a];
      const InstructionId &ib = isa[b];

      const double *ta = singleton_tp(ia);
      const double *tb = singleton_tp(ib);
      if (!ta || !tb) {
        result.missing_evidence.emplace_back(ia, ib);
        continue;
      }
      if (!tp_equal(*ta, *tb, eps))
        continue;

      // Every pair experiment {x -> m, i_C -> n} with x in {i_A, i_B}
      // and a third instruction i_C must have an eps-equal counterpart
      // with x swapped. Self-pairings are excluded.
      bool merged = true;
      bool missing = false;
      for (const auto &[e, cycles] : lookup) {
        if (e.counts.size() != 2)
          continue;
        for (const auto &[x, y] : {std::pair(ia, ib), std::pair(ib, ia)}) {
          auto it = e.counts.find(x);
          if (it == e.counts.end() || e.counts.count(y))
            continue;
          Experiment counterpart = e;
          std::int64_t m = it->second;
          counterpart.counts.erase(x);
          counterpart.counts[y] = m;
          auto other = lookup.find(counterpart);
          if (other == lookup.end()) {
            missing = true;
          } else if (!tp_equal(cycles, other->second, eps)) {
            merged = false;
          }
        }
        if (!merged)
          break;
      }
      if (!merged)
        continue;
      if (missing) {
        result.missing_evidence.emplace_back(ia, ib);
        continue;
      }
      uf.unite(a, b);
    }
  }

  std::map<std::size_t, std::vector<InstructionId>> groups;
  for (std::size_t i = 0; i < isa.size(); ++i)
    groups[uf.find(i)].push_back(isa[i]);

  std::vector<std::vector<InstructionId>> classes;
  for (auto &[root, members] : groups) {
    std::sort(members.begin(), members.end());
    classes.push_back(std::move(members));
  }
  std::sort(classes.begin(), classes.end(),
            [](const auto &x, const auto &y) { return x.front() < y.front(); });

  for (auto &members : classes) {
    for (const auto &insn : members)
      result.representative_of[insn] = members.front();
    result.classes.push_back(std::move(members));
  }
  return result;
}

MeasurementSet project(const MeasurementSet &meas,
                       const CongruencePartition &part) {
  MeasurementSet out;
  for (const auto &entry : meas.entries) {
    bool keep = true;
    for (const auto &[insn, count] : entry.experiment.counts) {
      if (!part.is_representative(insn)) {
        keep = false;
        break;
      }
    }
    if (keep)
      out.entries.push_back(entry);
  }
  return out;
}

} // namespace pmevo
