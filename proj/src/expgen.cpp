#include "pmevo/expgen.hpp"

#include <cmath>

namespace pmevo {

std::int64_t guarded_ceil(double x) {
  double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9)
    return static_cast<std::int64_t>(nearest);
  return static_cast<std::int64_t>(std::ceil(x));
}

std::vector<Experiment> gen_singletons(const std::vector<InstructionId> &isa) {
  if (isa.empty())
    throw EmptyIsa();
  std::vector<Experiment> out;
  out.reserve(isa.size());
  for (const auto &insn : isa)
    out.push_back(Experiment{{{insn, 1}}});
  return out;
}

std::vector<Experiment> gen_pairs(const std::vector<InstructionId> &isa) {
  if (isa.size() < 2)
    throw Error("pair generation needs at least 2 instructions");
  std::vector<Experiment> out;
  out.reserve(isa.size() * (isa.size() - 1) / 2);
  for (std::size_t a = 0; a < isa.size(); ++a)
    for (std::size_t b = a + 1; b < isa.size(); ++b)
      out.push_back(Experiment{{{isa[a], 1}, {isa[b], 1}}});
  return out;
}

std::vector<Experiment>
gen_weighted_pairs(const std::vector<InstructionId> &isa,
                   const std::map<InstructionId, double> &singleton_tp) {
  if (isa.empty())
    throw EmptyIsa();
  auto tp = [&](const InstructionId &insn) {
    auto it = singleton_tp.find(insn);
    if (it == singleton_tp.end())
      throw MissingThroughput(insn);
    return it->second;
  };
  std::vector<Experiment> out;
  for (const auto &a : isa) {
    for (const auto &b : isa) {
      if (a == b)
        continue;
      double ta = tp(a);
      double tb = tp(b);
      if (!(ta > tb))
        continue;
      std::int64_t n = guarded_ceil(ta / tb);
      out.push_back(Experiment{{{a, 1}, {b, n}}});
    }
  }
  return out;
}

} // namespace pmevo
