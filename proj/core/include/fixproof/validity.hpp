#ifndef FIXPROOF_VALIDITY_HPP
#define FIXPROOF_VALIDITY_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "fixproof/kernel.hpp"

namespace fixproof {

/// Per-edge relation between ordinal variables, with weak/strict arcs.
/// Strict dominates weak when both are derivable.
struct DescentGraph {
  std::set<std::string> source_vars;
  std::set<std::string> target_vars;
  std::map<std::pair<std::string, std::string>, bool> arcs;  // true = strict

  void add_arc(const std::string& src, const std::string& dst, bool strict);
  bool operator==(const DescentGraph&) const = default;
};

/// One edge of the proof graph: premise index, or -1 for a back edge.
struct EdgeRef {
  NodeId from = 0;
  int premise = -1;

  auto operator<=>(const EdgeRef&) const = default;
};

std::vector<EdgeRef> graph_edges(const ProofGraph& g);
NodeId edge_target(const ProofGraph& g, const EdgeRef& e);

/// The spec-level descent graph of an edge, over ordinal variables only.
DescentGraph descent_graph(const ProofGraph& g, const EdgeRef& e);

/// Variant used by the validity decision: adds a track for the anchor of the
/// constant infinity, so descent that proceeds by renaming infinity to a
/// variable at a back edge (the unit-stream pattern) is visible. The anchor
/// vertex is named "inf"; ordinary variables never collide with it since
/// "inf" is reserved in the surface grammar. Strict (inf, inf) steps on a
/// single edge are never recorded.
DescentGraph descent_graph_anchored(const ProofGraph& g, const EdgeRef& e);

/// Relational composition; an arc is strict iff some witnessing path uses at
/// least one strict arc. Throws MismatchedInterface.
DescentGraph compose(const DescentGraph& a, const DescentGraph& b);

struct ValidityResult {
  bool valid = true;
  std::vector<NodeId> witness;  // one bad cycle, as node ids, when invalid
  std::string message;
};

/// One labeled edge of the size-change problem.
struct SctEdge {
  NodeId from = 0;
  NodeId to = 0;
  DescentGraph graph;
};

/// Size-change closure over arbitrary labeled edges: every idempotent cycle
/// element must contain a strict self-arc.
ValidityResult sct_check(const std::vector<SctEdge>& edges);

/// Decides the validity condition: every infinite branch carries an infinite
/// descending chain of ordinal variables. Size-change closure over the
/// anchored descent graphs; invalid results name one bad cycle.
ValidityResult check_validity(const ProofGraph& g);

}  // namespace fixproof

#endif
