#include "pmevo/simulate.hpp"

#include <algorithm>
#include <vector>

namespace pmevo {

SimResult simulate_bottleneck(const PortMapping2 &m2, const Experiment2 &e2) {
  if (m2.num_ports > kMaxPorts)
    throw PortCountExceeded(m2.num_ports);
  m2.validate();

  // Flatten to (port mask, mass) pairs; masses merged per mask.
  std::vector<std::pair<PortMask, std::int64_t>> items;
  {
    std::map<PortMask, std::int64_t> merged;
    for (const auto &[item, mass] : e2.counts) {
      auto it = m2.allowed.find(item);
      if (it == m2.allowed.end())
        throw UnmappedItem(item);
      merged[it->second] += mass;
    }
    items.assign(merged.begin(), merged.end());
  }

  SimResult best;
  if (items.empty())
    return best;

  std::int64_t best_num = 0;
  int best_size = 0; // 0 means "none yet"
  const PortMask full = (PortMask{1} << m2.num_ports) - 1;
  for (PortMask q = 1; q <= full; ++q) {
    std::int64_t num = 0;
    for (const auto &[mask, mass] : items)
      if ((mask & ~q) == 0)
        num += mass;
    const int size = port_count(q);
    // num/size > best_num/best_size, compared exactly.
    const std::int64_t lhs = num * best_size;
    const std::int64_t rhs = best_num * size;
    bool take = false;
    if (best_size == 0 || lhs > rhs) {
      take = true;
    } else if (lhs == rhs) {
      if (size < best_size)
        take = true;
      else if (size == best_size && q < best.bottleneck_ports)
        take = true;
    }
    if (take) {
      best_num = num;
      best_size = size;
      best.bottleneck_ports = q;
    }
  }
  best.throughput = static_cast<double>(best_num) / best_size;
  return best;
}

SimResult simulate(const PortMapping3 &m, const Experiment &e) {
  auto [m2, e2] = reduce_to_two_level(m, e);
  return simulate_bottleneck(m2, e2);
}

namespace {

// Dinic max flow on double capacities; small instances only.
class FlowNetwork {
public:
  explicit FlowNetwork(int n) : head_(n, -1), level_(n), iter_(n) {}

  void add_edge(int from, int to, double cap) {
    edges_.push_back({to, head_[from], cap});
    head_[from] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({from, head_[to], 0.0});
    head_[to] = static_cast<int>(edges_.size()) - 1;
  }

  double max_flow(int s, int t) {
    double flow = 0.0;
    while (bfs(s, t)) {
      iter_ = head_;
      double f;
      while ((f = dfs(s, t, kInf)) > kEps)
        flow += f;
    }
    return flow;
  }

  double &capacity(int edge_index) { return edges_[edge_index].cap; }

private:
  static constexpr double kInf = 1e30;
  static constexpr double kEps = 1e-12;

  struct Edge {
    int to;
    int next;
    double cap;
  };

  bool bfs(int s, int t) {
    std::fill(level_.begin(), level_.end(), -1);
    std::vector<int> queue;
    queue.push_back(s);
    level_[s] = 0;
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      int v = queue[qi];
      for (int ei = head_[v]; ei != -1; ei = edges_[ei].next) {
        if (edges_[ei].cap > kEps && level_[edges_[ei].to] < 0) {
          level_[edges_[ei].to] = level_[v] + 1;
          queue.push_back(edges_[ei].to);
        }
      }
    }
    return level_[t] >= 0;
  }

  double dfs(int v, int t, double limit) {
    if (v == t)
      return limit;
    for (int &ei = iter_[v]; ei != -1; ei = edges_[ei].next) {
      Edge &edge = edges_[ei];
      if (edge.cap > kEps && level_[edge.to] == level_[v] + 1) {
        double d = dfs(edge.to, t, std::min(limit, edge.cap));
        if (d > kEps) {
          edge.cap -= d;
          edges_[ei ^ 1].cap += d;
          return d;
        }
      }
    }
    return 0.0;
  }

  std::vector<Edge> edges_;
  std::vector<int> head_;
  std::vector<int> level_;
  std::vector<int> iter_;
};

} // namespace

double oracle_throughput(const PortMapping2 &m2, const Experiment2 &e2) {
  m2.validate();
  std::vector<std::pair<PortMask, std::int64_t>> items;
  for (const auto &[item, mass] : e2.counts) {
    auto it = m2.allowed.find(item);
    if (it == m2.allowed.end())
      throw UnmappedItem(item);
    items.emplace_back(it->second, mass);
  }
  if (items.empty())
    return 0.0;

  double total = 0.0;
  for (const auto &[mask, mass] : items)
    total += static_cast<double>(mass);

  const int num_items = static_cast<int>(items.size());
  const int num_ports = m2.num_ports;
  // Node layout: 0 = source, 1..num_items = items,
  // num_items+1..num_items+num_ports = ports, last = sink.
  const int source = 0;
  const int sink = num_items + num_ports + 1;

  auto feasible = [&](double t) {
    FlowNetwork net(sink + 1);
    for (int i = 0; i < num_items; ++i) {
      net.add_edge(source, 1 + i, static_cast<double>(items[i].second));
      for (int k = 0; k < num_ports; ++k)
        if (items[i].first & (PortMask{1} << k))
          net.add_edge(1 + i, 1 + num_items + k, 1e30);
    }
    for (int k = 0; k < num_ports; ++k)
      net.add_edge(1 + num_items + k, sink, t);
    return net.max_flow(source, sink) >= total - 1e-9;
  };

  double lo = total / num_ports;
  double hi = total;
  if (feasible(lo))
    return lo;
  while (hi - lo > 1e-9) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

} // namespace pmevo
