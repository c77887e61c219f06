#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pmevo {

// Instructions are identified by their (unique, non-empty) name token.
using InstructionId = std::string;

// A micro-op is identified with the set of ports that can execute it,
// represented as a bitmask over 0-based port indices.
using PortMask = std::uint32_t;

// Hard cap on port counts; subset enumeration is 2^num_ports.
inline constexpr int kMaxPorts = 16;

inline int port_count(PortMask mask) { return std::popcount(mask); }

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnmappedInstruction : Error {
  explicit UnmappedInstruction(const InstructionId &insn)
      : Error("instruction not covered by mapping: " + insn) {}
};

struct UnmappedItem : Error {
  explicit UnmappedItem(std::uint64_t item)
      : Error("item not covered by two-level mapping: " +
              std::to_string(item)) {}
};

struct PortCountExceeded : Error {
  explicit PortCountExceeded(int num_ports)
      : Error("port count " + std::to_string(num_ports) + " exceeds limit " +
              std::to_string(kMaxPorts)) {}
};

struct ParseError : Error {
  using Error::Error;
};

struct InvalidMapping : Error {
  using Error::Error;
};

// Multiset of instructions, order-free.
struct Experiment {
  std::map<InstructionId, std::int64_t> counts;

  std::int64_t total_mass() const {
    std::int64_t sum = 0;
    for (const auto &[insn, n] : counts)
      sum += n;
    return sum;
  }

  bool operator==(const Experiment &) const = default;
  auto operator<=>(const Experiment &) const = default;
};

// Experiment over two-level items (item id -> occurrence mass).
struct Experiment2 {
  std::map<std::uint64_t, std::int64_t> counts;

  std::int64_t total_mass() const {
    std::int64_t sum = 0;
    for (const auto &[item, n] : counts)
      sum += n;
    return sum;
  }

  bool operator==(const Experiment2 &) const = default;
};

// Bipartite item -> port mapping. Items are abstract ids; after a
// three-level reduction the item id is the port mask of the micro-op.
struct PortMapping2 {
  int num_ports = 0;
  std::map<std::uint64_t, PortMask> allowed;

  void validate() const;
};

// Tripartite instruction -> micro-op -> port mapping with multiplicities.
// Micro-ops are anonymous; duplicate (instruction, port set) edges are
// merged by summing multiplicities, so the representation is canonical.
class PortMapping3 {
public:
  PortMapping3() = default;
  explicit PortMapping3(int num_ports);

  int num_ports() const { return num_ports_; }

  // Adds n occurrences of the micro-op `ports` to `insn`, merging with an
  // existing edge for the same port set.
  void add_edge(const InstructionId &insn, PortMask ports, std::int64_t n);

  bool covers(const InstructionId &insn) const {
    return assignment_.find(insn) != assignment_.end();
  }

  const std::map<PortMask, std::int64_t> &edges(const InstructionId &insn) const;

  const std::map<InstructionId, std::map<PortMask, std::int64_t>> &
  assignment() const {
    return assignment_;
  }

  // Sum of n * |u| over all edges.
  std::int64_t volume() const;

  void validate() const;

  bool operator==(const PortMapping3 &) const = default;

private:
  int num_ports_ = 0;
  std::map<InstructionId, std::map<PortMask, std::int64_t>> assignment_;
};

struct Measurement {
  Experiment experiment;
  double cycles = 0.0;
};

struct MeasurementSet {
  std::vector<Measurement> entries;
};

// Three-level to two-level reduction: each micro-op u receives the mass
// sum of e(i) * n over edges (i, n, u); the returned mapping keeps only
// micro-ops with positive mass, keyed by their port mask.
std::pair<PortMapping2, Experiment2> reduce_to_two_level(const PortMapping3 &m,
                                                         const Experiment &e);

// JSON (de)serialization for the three on-disk schemas.
std::string mapping_to_json(const PortMapping3 &m);
PortMapping3 mapping_from_json(const std::string &text);

std::string experiments_to_json(const std::vector<Experiment> &exps);
std::vector<Experiment> experiments_from_json(const std::string &text);

std::string measurements_to_json(const MeasurementSet &meas);
MeasurementSet measurements_from_json(const std::string &text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

} // namespace pmevo
