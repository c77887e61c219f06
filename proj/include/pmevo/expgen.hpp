#pragma once

#include "pmevo/core.hpp"

namespace pmevo {

struct EmptyIsa : Error {
  EmptyIsa() : Error("instruction set is empty") {}
};

struct MissingThroughput : Error {
  explicit MissingThroughput(const InstructionId &insn)
      : Error("no singleton throughput for instruction: " + insn) {}
};

// Ceiling with a guard: values within 1e-9 of an integer are snapped to
// that integer first, so near-integer measured throughputs stay stable.
std::int64_t guarded_ceil(double x);

// One {i -> 1} experiment per instruction, in input order.
std::vector<Experiment> gen_singletons(const std::vector<InstructionId> &isa);

// One {i_A -> 1, i_B -> 1} experiment per unordered pair.
std::vector<Experiment> gen_pairs(const std::vector<InstructionId> &isa);

// For each ordered pair with tp(i_A) > tp(i_B): {i_A -> 1, i_B -> n}
// with n = ceil(tp(i_A) / tp(i_B)).
std::vector<Experiment>
gen_weighted_pairs(const std::vector<InstructionId> &isa,
                   const std::map<InstructionId, double> &singleton_tp);

} // namespace pmevo
