#include "fixproof/validity.hpp"

#include <algorithm>
#include <deque>

namespace fixproof {

namespace {
const std::string kAnchor = "inf";

std::set<std::string> vars_of(const ConstraintForest& o) {
  std::set<std::string> out;
  for (const auto& v : o.variables()) out.insert(v);
  return out;
}

OrdinalTerm as_term(const std::string& name) {
  return name == kAnchor ? OrdinalTerm::infinity() : OrdinalTerm::var(name);
}

DescentGraph edge_graph(const ProofGraph& g, const EdgeRef& e, bool anchored) {
  const Node& n = g.at(e.from);
  DescentGraph d;
  if (e.premise >= 0) {
    const Node& t = g.at(n.rule_step().premises[e.premise]);
    const ConstraintForest& src = n.sequent.constraint;
    const ConstraintForest& dst = t.sequent.constraint;
    d.source_vars = vars_of(src);
    d.target_vars = vars_of(dst);
    if (anchored) {
      d.source_vars.insert(kAnchor);
      d.target_vars.insert(kAnchor);
    }
    for (const auto& v : d.source_vars) {
      if (dst.contains(as_term(v))) d.add_arc(v, v, false);
      for (const auto& w : d.target_vars) {
        if (w == kAnchor) continue;  // no strict arcs into the anchor
        if (src.contains(as_term(v)) && dst.contains(as_term(v)) && dst.contains(as_term(w)) &&
            dst.entails(as_term(w), as_term(v)) && as_term(w) != as_term(v))
          d.add_arc(v, w, true);
      }
    }
    return d;
  }
  // back edge: target vars are the companion's; thread continuation runs
  // through the renaming.
  const BackEdge& be = n.back_edge();
  const ConstraintForest& leaf = n.sequent.constraint;
  const ConstraintForest& comp = g.at(be.companion).sequent.constraint;
  d.source_vars = vars_of(leaf);
  d.target_vars = vars_of(comp);
  if (anchored) {
    d.source_vars.insert(kAnchor);
    d.target_vars.insert(kAnchor);
  }
  for (const auto& x : d.target_vars) {
    OrdinalTerm img = be.ord(as_term(x));
    std::string img_name = img.is_infinity() ? kAnchor : img.name();
    if (!anchored && img.is_infinity()) continue;  // threads may not pass through infinity
    if (!d.source_vars.count(img_name)) continue;
    d.add_arc(img_name, x, false);
    for (const auto& v : d.source_vars) {
      if (v == kAnchor && img.is_infinity()) continue;
      if (leaf.contains(as_term(v)) && leaf.contains(img) && leaf.entails(img, as_term(v)) &&
          !(img == as_term(v)))
        d.add_arc(v, x, true);
    }
  }
  return d;
}

}  // namespace

void DescentGraph::add_arc(const std::string& src, const std::string& dst, bool strict) {
  auto [it, inserted] = arcs.try_emplace({src, dst}, strict);
  if (!inserted) it->second = it->second || strict;
}

std::vector<EdgeRef> graph_edges(const ProofGraph& g) {
  std::vector<EdgeRef> out;
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.at(i).is_back_edge()) {
      out.push_back({i, -1});
    } else {
      const auto& ps = g.at(i).rule_step().premises;
      for (int k = 0; k < static_cast<int>(ps.size()); ++k) out.push_back({i, k});
    }
  }
  return out;
}

NodeId edge_target(const ProofGraph& g, const EdgeRef& e) {
  const Node& n = g.at(e.from);
  if (e.premise < 0) return n.back_edge().companion;
  return n.rule_step().premises[e.premise];
}

DescentGraph descent_graph(const ProofGraph& g, const EdgeRef& e) {
  return edge_graph(g, e, false);
}

DescentGraph descent_graph_anchored(const ProofGraph& g, const EdgeRef& e) {
  return edge_graph(g, e, true);
}

DescentGraph compose(const DescentGraph& a, const DescentGraph& b) {
  if (a.target_vars != b.source_vars)
    throw Error(ErrorCode::MismatchedInterface, "descent graph interfaces do not match");
  DescentGraph out;
  out.source_vars = a.source_vars;
  out.target_vars = b.target_vars;
  for (const auto& [xy, s1] : a.arcs) {
    for (const auto& [yz, s2] : b.arcs) {
      if (xy.second != yz.first) continue;
      out.add_arc(xy.first, yz.second, s1 || s2);
    }
  }
  return out;
}

namespace {

bool has_strict_self_arc(const DescentGraph& d) {
  for (const auto& [xy, strict] : d.arcs)
    if (strict && xy.first == xy.second) return true;
  return false;
}

struct ClosureElem {
  NodeId src, dst;
  DescentGraph graph;
  std::vector<NodeId> path;  // node ids visited, src first
};

}  // namespace

ValidityResult sct_check(const std::vector<SctEdge>& edges) {
  // Closure over all composable paths; small at the scale we handle.
  std::vector<ClosureElem> worklist;
  std::vector<ClosureElem> seen;
  auto find = [&](NodeId s, NodeId t, const DescentGraph& d) {
    for (const auto& e : seen)
      if (e.src == s && e.dst == t && e.graph == d) return true;
    return false;
  };
  for (const SctEdge& e : edges) {
    ClosureElem c{e.from, e.to, e.graph, {e.from}};
    if (!find(c.src, c.dst, c.graph)) {
      seen.push_back(c);
      worklist.push_back(c);
    }
  }
  // index basic edges by source node for composition
  std::vector<ClosureElem> basic = seen;
  while (!worklist.empty()) {
    ClosureElem cur = worklist.back();
    worklist.pop_back();
    for (const auto& b : basic) {
      if (b.src != cur.dst) continue;
      ClosureElem next{cur.src, b.dst, compose(cur.graph, b.graph), cur.path};
      next.path.push_back(b.src);
      if (!find(next.src, next.dst, next.graph)) {
        seen.push_back(next);
        worklist.push_back(next);
      }
    }
  }
  for (const auto& e : seen) {
    if (e.src != e.dst) continue;
    DescentGraph sq = compose(e.graph, e.graph);
    if (!(sq == e.graph)) continue;  // only idempotent elements decide
    if (!has_strict_self_arc(e.graph)) {
      ValidityResult r;
      r.valid = false;
      r.witness = e.path;
      r.witness.push_back(e.dst);
      r.message = "cycle through node " + std::to_string(e.src) +
                  " admits no infinitely descending chain of ordinal variables";
      return r;
    }
  }
  return ValidityResult{};
}

ValidityResult check_validity(const ProofGraph& g) {
  std::vector<SctEdge> edges;
  for (const EdgeRef& e : graph_edges(g))
    edges.push_back(SctEdge{e.from, edge_target(g, e), descent_graph_anchored(g, e)});
  return sct_check(edges);
}

}  // namespace fixproof
