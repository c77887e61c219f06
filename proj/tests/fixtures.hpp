#pragma once

#include <random>

#include "pmevo/core.hpp"

// Recurring example mappings used across the test suites.
namespace fixtures {

using namespace pmevo;

// mul -> {P0}, add/sub -> {P0,P1}, store -> {P2}, one micro-op each.
inline PortMapping3 flat_mapping() {
  PortMapping3 m(3);
  m.add_edge("mul", 0b001, 1);
  m.add_edge("add", 0b011, 1);
  m.add_edge("sub", 0b011, 1);
  m.add_edge("store", 0b100, 1);
  return m;
}

// mul -> 2x{P0}, add/sub -> 1x{P0,P1}, store -> 1x{P0,P1} + 1x{P2}.
inline PortMapping3 decomposed_mapping() {
  PortMapping3 m(3);
  m.add_edge("mul", 0b001, 2);
  m.add_edge("add", 0b011, 1);
  m.add_edge("sub", 0b011, 1);
  m.add_edge("store", 0b011, 1);
  m.add_edge("store", 0b100, 1);
  return m;
}

// Random two-level instance for property and equivalence tests.
inline std::pair<PortMapping2, Experiment2>
random_two_level(std::mt19937_64 &rng, int max_ports = 8, int max_items = 10,
                 std::int64_t max_mass = 10) {
  std::uniform_int_distribution<int> ports_dist(1, max_ports);
  int num_ports = ports_dist(rng);
  const PortMask full = (PortMask{1} << num_ports) - 1;
  std::uniform_int_distribution<PortMask> mask_dist(1, full);
  std::uniform_int_distribution<int> item_dist(1, max_items);
  std::uniform_int_distribution<std::int64_t> mass_dist(1, max_mass);
  PortMapping2 m2;
  m2.num_ports = num_ports;
  Experiment2 e2;
  int items = item_dist(rng);
  for (int j = 0; j < items; ++j) {
    m2.allowed[j] = mask_dist(rng);
    e2.counts[j] = mass_dist(rng);
  }
  return {std::move(m2), std::move(e2)};
}

// Random three-level mapping over a synthetic ISA.
inline PortMapping3 random_mapping(const std::vector<InstructionId> &isa,
                                   int num_ports, int max_uops, int max_mult,
                                   std::mt19937_64 &rng) {
  const PortMask full = (PortMask{1} << num_ports) - 1;
  PortMapping3 m(num_ports);
  std::uniform_int_distribution<int> uop_count(1, max_uops);
  std::uniform_int_distribution<PortMask> mask_dist(1, full);
  std::uniform_int_distribution<int> mult(1, max_mult);
  for (const auto &insn : isa) {
    int k = uop_count(rng);
    std::vector<PortMask> chosen;
    while (static_cast<int>(chosen.size()) < k) {
      PortMask mask = mask_dist(rng);
      bool seen = false;
      for (PortMask c : chosen)
        seen = seen || c == mask;
      if (!seen)
        chosen.push_back(mask);
    }
    for (PortMask mask : chosen)
      m.add_edge(insn, mask, mult(rng));
  }
  return m;
}

inline std::vector<InstructionId> synthetic_isa(int count) {
  std::vector<InstructionId> isa;
  for (int i = 0; i < count; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "i%02d", i);
    isa.push_back(buf);
  }
  return isa;
}

} // namespace fixtures
