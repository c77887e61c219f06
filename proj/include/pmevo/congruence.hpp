#pragma once

#include "pmevo/core.hpp"

namespace pmevo {

// Symmetric relative difference below eps.
bool tp_equal(double t1, double t2, double eps);

struct CongruencePartition {
  // Classes sorted by representative; members sorted within each class.
  std::vector<std::vector<InstructionId>> classes;
  // Instruction -> lexicographically smallest member of its class.
  std::map<InstructionId, InstructionId> representative_of;
  // Pairs that could not be compared for lack of measurements; they are
  // left unmerged rather than failing.
  std::vector<std::pair<InstructionId, InstructionId>> missing_evidence;

  bool is_representative(const InstructionId &insn) const {
    auto it = representative_of.find(insn);
    return it != representative_of.end() && it->second == insn;
  }
};

// Two instructions fall into the same class iff their singleton
// throughputs are eps-equal and every available pair experiment with a
// third instruction has an eps-equal counterpart. The pairwise relation
// is closed into a partition with union-find.
CongruencePartition partition(const MeasurementSet &meas,
                              const std::vector<InstructionId> &isa,
                              double eps);

// Keeps exactly the experiments whose instructions are all representatives.
MeasurementSet project(const MeasurementSet &meas,
                       const CongruencePartition &part);

} // namespace pmevo
