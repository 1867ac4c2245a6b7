#pragma once

#include <string>
#include <vector>

#include "ivfalsify/observed.hpp"
#include "ivfalsify/rational.hpp"
#include "ivfalsify/typespace.hpp"

namespace ivfalsify {

struct FlowEdge {
  int from = 0;
  int to = 0;
  Rational capacity;
  Rational flow;  // filled by max_flow
};

/// Transportation form of the binary-instrument consistency problem.
/// Nodes: 0 = SRC, 1..L = x@0 (treatment shares under the first instrument),
/// L+1..2L = x@1 (shares under the second), 2L+1 = SNK. A unit of feasible
/// flow is exactly a type distribution matching both observed slices.
class FlowNetwork {
 public:
  FlowNetwork(int n_treatments, std::vector<std::string> node_names,
              std::vector<FlowEdge> edges);

  int n_treatments() const { return L_; }
  int n_nodes() const { return 2 * L_ + 2; }
  int source() const { return 0; }
  int sink() const { return 2 * L_ + 1; }
  const std::string& node_name(int node) const { return node_names_.at(node); }

  const std::vector<FlowEdge>& edges() const { return edges_; }
  std::vector<FlowEdge>& edges() { return edges_; }

  bool flows_computed = false;

 private:
  int L_;
  std::vector<std::string> node_names_;
  std::vector<FlowEdge> edges_;
};

/// Build the network for a binary-instrument law. Cross edges exist exactly
/// for response pairs the restriction allows; with `exclusion_caps` the
/// stay-put edge at x is capped by the overlap mass psi(x) instead of 1.
/// Rejects non-binary instruments and restrictions with extra rows (those
/// have no transportation equivalent; use the linear-system path).
FlowNetwork build_network(const ObservedDistribution& d, const RestrictionSpec& restriction,
                          bool exclusion_caps);

/// Exact Edmonds-Karp (BFS augmenting paths). Resets and stores per-edge
/// flows, returns the attained value. The law is consistent with the
/// declared restriction (at this relaxation level) iff the value is 1.
Rational max_flow(FlowNetwork& net);

struct Cut {
  std::vector<std::string> source_side;  // node names, ascending node index
  Rational capacity;
  std::vector<FlowEdge> crossing;  // saturated edges leaving the source side
};

/// Minimum cut from residual reachability after max_flow (computed on
/// demand). Its capacity provably equals the max-flow value; the crossing
/// edges name the binding shares/ceilings.
Cut min_cut(FlowNetwork& net);

/// Read a unit max flow back as a type distribution (cross-edge flows).
/// Throws unless the flow value is exactly 1.
TypeDistribution flow_to_distribution(const FlowNetwork& net, const TypeSpace& types);

/// One line per edge: "<from> <to> <p/q>", in construction order.
std::string dump_network(const FlowNetwork& net);

}  // namespace ivfalsify
