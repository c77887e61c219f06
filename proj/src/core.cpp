#include "pmevo/core.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace pmevo {

namespace {

void check_port_range(int num_ports) {
  if (num_ports <= 0)
    throw InvalidMapping("num_ports must be positive");
  if (num_ports > kMaxPorts)
    throw PortCountExceeded(num_ports);
}

void check_mask(PortMask mask, int num_ports, const std::string &context) {
  if (mask == 0)
    throw InvalidMapping("empty port set in " + context);
  if (mask >> num_ports)
    throw InvalidMapping("port index out of range in " + context);
}

} // namespace

void PortMapping2::validate() const {
  check_port_range(num_ports);
  for (const auto &[item, mask] : allowed)
    check_mask(mask, num_ports, "item " + std::to_string(item));
}

PortMapping3::PortMapping3(int num_ports) : num_ports_(num_ports) {
  check_port_range(num_ports);
}

void PortMapping3::add_edge(const InstructionId &insn, PortMask ports,
                            std::int64_t n) {
  if (insn.empty())
    throw InvalidMapping("empty instruction name");
  if (n < 1)
    throw InvalidMapping("multiplicity must be >= 1 for " + insn);
  check_mask(ports, num_ports_, insn);
  assignment_[insn][ports] += n;
}

const std::map<PortMask, std::int64_t> &
PortMapping3::edges(const InstructionId &insn) const {
  auto it = assignment_.find(insn);
  if (it == assignment_.end())
    throw UnmappedInstruction(insn);
  return it->second;
}

std::int64_t PortMapping3::volume() const {
  std::int64_t v = 0;
  for (const auto &[insn, edges] : assignment_)
    for (const auto &[mask, n] : edges)
      v += n * port_count(mask);
  return v;
}

void PortMapping3::validate() const {
  check_port_range(num_ports_);
  for (const auto &[insn, edges] : assignment_) {
    if (edges.empty())
      throw InvalidMapping("instruction without micro-ops: " + insn);
    for (const auto &[mask, n] : edges) {
      check_mask(mask, num_ports_, insn);
      if (n < 1)
        throw InvalidMapping("non-positive multiplicity for " + insn);
    }
  }
}

std::pair<PortMapping2, Experiment2> reduce_to_two_level(const PortMapping3 &m,
                                                         const Experiment &e) {
  PortMapping2 m2;
  m2.num_ports = m.num_ports();
  Experiment2 e2;
  for (const auto &[insn, count] : e.counts) {
    const auto &edges = m.edges(insn); // throws UnmappedInstruction
    for (const auto &[mask, n] : edges)
      e2.counts[mask] += count * n;
  }
  for (const auto &[mask, mass] : e2.counts)
    m2.allowed[mask] = static_cast<PortMask>(mask);
  return {std::move(m2), std::move(e2)};
}

using json = nlohmann::json;

namespace {

json parse_json(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &ex) {
    throw ParseError(ex.what());
  }
}

Experiment experiment_from_json(const json &obj) {
  if (!obj.is_object() || obj.empty())
    throw ParseError("experiment must be a non-empty object");
  Experiment e;
  for (const auto &[insn, count] : obj.items()) {
    if (!count.is_number_integer() || count.get<std::int64_t>() < 1)
      throw ParseError("experiment count for " + insn + " must be >= 1");
    e.counts[insn] = count.get<std::int64_t>();
  }
  return e;
}

json experiment_to_json(const Experiment &e) {
  json obj = json::object();
  for (const auto &[insn, count] : e.counts)
    obj[insn] = count;
  return obj;
}

} // namespace

std::string mapping_to_json(const PortMapping3 &m) {
  json assignment = json::object();
  for (const auto &[insn, edges] : m.assignment()) {
    json list = json::array();
    for (const auto &[mask, n] : edges) {
      json ports = json::array();
      for (int k = 0; k < m.num_ports(); ++k)
        if (mask & (PortMask{1} << k))
          ports.push_back(k);
      list.push_back({{"ports", ports}, {"n", n}});
    }
    assignment[insn] = list;
  }
  json doc = {{"num_ports", m.num_ports()}, {"assignment", assignment}};
  return doc.dump(2) + "\n";
}

PortMapping3 mapping_from_json(const std::string &text) {
  json doc = parse_json(text);
  if (!doc.contains("num_ports") || !doc.contains("assignment"))
    throw ParseError("mapping file needs num_ports and assignment");
  int num_ports = doc["num_ports"].get<int>();
  if (num_ports <= 0)
    throw ParseError("num_ports must be positive");
  if (num_ports > kMaxPorts)
    throw PortCountExceeded(num_ports);
  PortMapping3 m(num_ports);
  for (const auto &[insn, edges] : doc["assignment"].items()) {
    if (!edges.is_array() || edges.empty())
      throw ParseError("assignment for " + insn + " must be a non-empty array");
    for (const auto &edge : edges) {
      PortMask mask = 0;
      for (const auto &p : edge.at("ports")) {
        int k = p.get<int>();
        if (k < 0 || k >= num_ports)
          throw ParseError("port index out of range for " + insn);
        mask |= PortMask{1} << k;
      }
      std::int64_t n = edge.at("n").get<std::int64_t>();
      if (n < 1)
        throw ParseError("multiplicity must be >= 1 for " + insn);
      if (mask == 0)
        throw ParseError("empty port set for " + insn);
      m.add_edge(insn, mask, n);
    }
  }
  m.validate();
  return m;
}

std::string experiments_to_json(const std::vector<Experiment> &exps) {
  json list = json::array();
  for (const auto &e : exps)
    list.push_back(experiment_to_json(e));
  json doc = {{"experiments", list}};
  return doc.dump(2) + "\n";
}

std::vector<Experiment> experiments_from_json(const std::string &text) {
  json doc = parse_json(text);
  if (!doc.contains("experiments") || !doc["experiments"].is_array())
    throw ParseError("experiment file needs an experiments array");
  std::vector<Experiment> out;
  for (const auto &obj : doc["experiments"])
    out.push_back(experiment_from_json(obj));
  return out;
}

std::string measurements_to_json(const MeasurementSet &meas) {
  json list = json::array();
  for (const auto &entry : meas.entries)
    list.push_back({{"experiment", experiment_to_json(entry.experiment)},
                    {"cycles", entry.cycles}});
  json doc = {{"measurements", list}};
  return doc.dump(2) + "\n";
}

MeasurementSet measurements_from_json(const std::string &text) {
  json doc = parse_json(text);
  if (!doc.contains("measurements") || !doc["measurements"].is_array())
    throw ParseError("measurement file needs a measurements array");
  // Duplicate experiments are merged by median cycles.
  std::map<Experiment, std::vector<double>> merged;
  std::vector<Experiment> order;
  for (const auto &obj : doc["measurements"]) {
    Experiment e = experiment_from_json(obj.at("experiment"));
    double cycles = obj.at("cycles").get<double>();
    if (!(cycles > 0.0) || !std::isfinite(cycles))
      throw ParseError("non-positive throughput for an experiment");
    auto [it, inserted] = merged.try_emplace(e);
    if (inserted)
      order.push_back(e);
    it->second.push_back(cycles);
  }
  MeasurementSet out;
  for (const auto &e : order) {
    auto values = merged.at(e);
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    double median = (n % 2 == 1) ? values[n / 2]
                                 : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    out.entries.push_back({e, median});
  }
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("cannot write file: " + path);
  out << content;
}

} // namespace pmevo
