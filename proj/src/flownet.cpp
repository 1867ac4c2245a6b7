#include "ivfalsify/flownet.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "ivfalsify/psi.hpp"

namespace ivfalsify {

FlowNetwork::FlowNetwork(int n_treatments, std::vector<std::string> node_names,
                         std::vector<FlowEdge> edges)
    : L_(n_treatments), node_names_(std::move(node_names)), edges_(std::move(edges)) {}

FlowNetwork build_network(const ObservedDistribution& d, const RestrictionSpec& restriction,
                          bool exclusion_caps) {
  const Support& s = d.support();
  if (s.n_instruments() != 2) {
    throw std::invalid_argument("network form needs a binary instrument");
  }
  if (!restriction.extra_rows.empty()) {
    throw std::invalid_argument("restrictions with extra rows have no network form; "
                                "use the linear-system path");
  }
  const int L = s.n_treatments();

  std::set<std::pair<int, int>> forbidden;
  for (const auto& response : restriction.ruled_out) {
    if (response.size() != 2) {
      throw std::invalid_argument("ruled-out response vector length does not match K=2");
    }
    forbidden.emplace(response[0], response[1]);
  }

  std::vector<std::string> names(2 * L + 2);
  names[0] = "SRC";
  names[2 * L + 1] = "SNK";
  for (int l = 0; l < L; ++l) {
    names[1 + l] = s.treatments[l] + "@0";
    names[1 + L + l] = s.treatments[l] + "@1";
  }

  std::vector<FlowEdge> edges;
  for (int l = 0; l < L; ++l) {
    edges.push_back({0, 1 + l, d.cond_treatment(0, l), Rational(0)});
  }
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < L; ++b) {
      if (forbidden.count({a, b})) continue;
      Rational cap = exclusion_caps && a == b ? psi_mass(d, a, {0, 1}) : Rational(1);
      edges.push_back({1 + a, 1 + L + b, cap, Rational(0)});
    }
  }
  for (int l = 0; l < L; ++l) {
    edges.push_back({1 + L + l, 2 * L + 1, d.cond_treatment(1, l), Rational(0)});
  }
  return FlowNetwork(L, std::move(names), std::move(edges));
}

namespace {

/// Residual arc list: arc i and i^1 are a forward/backward pair.
struct Residual {
  std::vector<int> head;
  std::vector<Rational> cap;
  std::vector<std::vector<int>> out;

  explicit Residual(const FlowNetwork& net) : out(net.n_nodes()) {
    for (const auto& e : net.edges()) {
      out[e.from].push_back(static_cast<int>(head.size()));
      head.push_back(e.to);
      cap.push_back(e.capacity);
      out[e.to].push_back(static_cast<int>(head.size()));
      head.push_back(e.from);
      cap.push_back(Rational(0));
    }
  }
};

}  // namespace

Rational max_flow(FlowNetwork& net) {
  Residual res(net);
  const int n = net.n_nodes();
  Rational value = 0;

  for (;;) {
    std::vector<int> via(n, -1);  // arc taken to reach each node
    std::vector<bool> seen(n, false);
    std::deque<int> queue{net.source()};
    seen[net.source()] = true;
    while (!queue.empty() && !seen[net.sink()]) {
      int u = queue.front();
      queue.pop_front();
      for (int arc : res.out[u]) {
        int v = res.head[arc];
        if (seen[v] || res.cap[arc] == 0) continue;
        seen[v] = true;
        via[v] = arc;
        queue.push_back(v);
      }
    }
    if (!seen[net.sink()]) break;

    Rational bottleneck;
    bool first = true;
    for (int v = net.sink(); v != net.source(); ) {
      int arc = via[v];
      if (first || res.cap[arc] < bottleneck) bottleneck = res.cap[arc];
      first = false;
      v = res.head[arc ^ 1];
    }
    for (int v = net.sink(); v != net.source(); ) {
      int arc = via[v];
      res.cap[arc] -= bottleneck;
      res.cap[arc ^ 1] += bottleneck;
      v = res.head[arc ^ 1];
    }
    value += bottleneck;
  }

  for (size_t i = 0; i < net.edges().size(); ++i) {
    net.edges()[i].flow = res.cap[2 * i + 1];  // backward capacity == pushed flow
  }
  net.flows_computed = true;
  return value;
}

Cut min_cut(FlowNetwork& net) {
  if (!net.flows_computed) max_flow(net);

  // Residual reachability under the stored flows.
  const int n = net.n_nodes();
  std::vector<std::vector<std::pair<int, Rational>>> residual(n);
  for (const auto& e : net.edges()) {
    residual[e.from].push_back({e.to, e.capacity - e.flow});
    residual[e.to].push_back({e.from, e.flow});
  }
  std::vector<bool> reach(n, false);
  std::deque<int> queue{net.source()};
  reach[net.source()] = true;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (const auto& [v, slack] : residual[u]) {
      if (!reach[v] && slack > 0) {
        reach[v] = true;
        queue.push_back(v);
      }
    }
  }

  Cut cut;
  cut.capacity = 0;
  Rational value = 0;
  for (const auto& e : net.edges()) {
    if (reach[e.from] && !reach[e.to]) {
      cut.capacity += e.capacity;
      cut.crossing.push_back(e);
    }
    if (e.from == net.source()) value += e.flow;
  }
  for (int v = 0; v < n; ++v) {
    if (reach[v]) cut.source_side.push_back(net.node_name(v));
  }
  if (cut.capacity != value) {
    throw std::logic_error("internal error: residual cut capacity differs from flow value");
  }
  return cut;
}

TypeDistribution flow_to_distribution(const FlowNetwork& net, const TypeSpace& types) {
  if (!net.flows_computed) {
    throw std::invalid_argument("compute max_flow before extracting a distribution");
  }
  if (types.n_instruments() != 2 || types.n_treatments() != net.n_treatments()) {
    throw std::invalid_argument("type space does not match the network");
  }
  Rational value = 0;
  for (const auto& e : net.edges()) {
    if (e.from == net.source()) value += e.flow;
  }
  if (value != 1) {
    throw std::invalid_argument("flow value is " + format_rational(value) +
                                ", not 1; no full coupling exists");
  }
  const int L = net.n_treatments();
  TypeDistribution p(types.size(), Rational(0));
  for (const auto& e : net.edges()) {
    if (e.from >= 1 && e.from <= L && e.to >= 1 + L && e.to <= 2 * L) {
      p[types.index_of({e.from - 1, e.to - 1 - L})] = e.flow;
    }
  }
  return p;
}

std::string dump_network(const FlowNetwork& net) {
  std::string out;
  for (const auto& e : net.edges()) {
    out += net.node_name(e.from) + " " + net.node_name(e.to) + " " +
           format_rational(e.capacity) + "\n";
  }
  return out;
}

}  // namespace ivfalsify
