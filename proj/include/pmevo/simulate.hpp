#pragma once

#include "pmevo/core.hpp"

namespace pmevo {

struct SimResult {
  double throughput = 0.0;
  // The maximizing port subset; ties broken by smallest cardinality,
  // then lowest bitmask value.
  PortMask bottleneck_ports = 0;
};

// Bottleneck throughput: max over non-empty Q of the mass that must run
// on ports in Q, divided by |Q|. Numerators stay in exact integer
// arithmetic; comparisons between subsets cross-multiply so the argmax
// is exact.
SimResult simulate_bottleneck(const PortMapping2 &m2, const Experiment2 &e2);

// Three-level throughput via reduction to the two-level model.
SimResult simulate(const PortMapping3 &m, const Experiment &e);

// Independent reference: the scheduling LP solved by binary search on t
// with a max-flow feasibility check per candidate. Absolute tolerance
// 1e-9. Deliberately shares no code with simulate_bottleneck.
double oracle_throughput(const PortMapping2 &m2, const Experiment2 &e2);

} // namespace pmevo
