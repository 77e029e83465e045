#include "fixproof/rewrite.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

namespace fixproof {

const char* rewrite_rule_name(RewriteRuleId r) {
  switch (r) {
    case RewriteRuleId::OrRed: return "OrRed";
    case RewriteRuleId::AndRed: return "AndRed";
    case RewriteRuleId::ImpRed: return "ImpRed";
    case RewriteRuleId::MuRed: return "MuRed";
    case RewriteRuleId::NuRed: return "NuRed";
    case RewriteRuleId::IdRed: return "IdRed";
    case RewriteRuleId::ContrRed: return "ContrRed";
    case RewriteRuleId::WeakRed: return "WeakRed";
    case RewriteRuleId::PermOrR: return "PermOrR";
    case RewriteRuleId::PermAndR: return "PermAndR";
    case RewriteRuleId::PermImpR: return "PermImpR";
    case RewriteRuleId::PermMuR: return "PermMuR";
    case RewriteRuleId::PermNuR: return "PermNuR";
    case RewriteRuleId::CutMerge: return "CutMerge";
  }
  return "?";
}

namespace {

const OrdinalTerm kInf = OrdinalTerm::infinity();

using OrdMap = std::map<OrdinalTerm, OrdinalTerm>;
using VarMap = std::map<std::string, std::string>;

OrdinalTerm lookup(const OrdMap& m, const OrdinalTerm& t) {
  auto it = m.find(t);
  return it == m.end() ? t : it->second;
}
std::string lookup(const VarMap& m, const std::string& v) {
  auto it = m.find(v);
  return it == m.end() ? v : it->second;
}

/// Which bound names of a rule are introduced into which premise.
std::vector<std::string> introduced_for_premise(const RuleInstance& r, size_t premise_idx) {
  switch (r.kind) {
    case RuleKind::OrL:
      return {r.bound[premise_idx]};
    case RuleKind::AndL:
    case RuleKind::Contr:
      return {r.bound[0], r.bound[1]};
    case RuleKind::ImpR:
      return {r.bound[0]};
    case RuleKind::ImpL:
      return premise_idx == 1 ? std::vector<std::string>{r.bound[0]} : std::vector<std::string>{};
    case RuleKind::MuL:
    case RuleKind::NuL:
      return {r.bound[0]};
    case RuleKind::Cut:
      return premise_idx == r.bound.size() ? r.bound : std::vector<std::string>{};
    default:
      return {};
  }
}

struct Engine {
  ProofGraph g;

  explicit Engine(ProofGraph graph) : g(std::move(graph)) {}

  const Node& node(NodeId id) const { return g.at(id); }

  // ---------------------------------------------------------------------
  // Subtree copy under a renaming; the workhorse behind back-edge expansion.

  struct Snapshot {
    NodeId copy_id;
    OrdMap omap;
    VarMap vmap;
  };

  NodeId copy_subtree(NodeId src, OrdMap omap, VarMap vmap, ConstraintForest o,
                      std::map<NodeId, Snapshot>& copied) {
    Node orig = g.at(src);  // by value: the arena may grow while we recurse

    Sequent seq;
    seq.constraint = o;
    for (const auto& [x, f] : orig.sequent.context)
      seq.context.emplace_back(lookup(vmap, x),
                               f.map_ordinals([&](const OrdinalTerm& t) { return lookup(omap, t); }));
    seq.conclusion =
        orig.sequent.conclusion.map_ordinals([&](const OrdinalTerm& t) { return lookup(omap, t); });

    if (orig.is_back_edge()) {
      const BackEdge& be = orig.back_edge();
      BackEdge out;
      if (auto it = copied.find(be.companion); it != copied.end()) {
        // companion lies inside the copied region: retarget to its copy
        const Snapshot& snap = it->second;
        out.companion = snap.copy_id;
        const Sequent& cseq_copy = g.at(snap.copy_id).sequent;
        const Sequent& cseq_orig = g.at(be.companion).sequent;
        std::vector<OrdinalTerm> dom_orig;
        dom_orig.push_back(kInf);
        for (const auto& v : cseq_orig.constraint.variables()) dom_orig.push_back(OrdinalTerm::var(v));
        auto preimage = [&](const OrdinalTerm& s) -> std::optional<OrdinalTerm> {
          std::optional<OrdinalTerm> best;
          for (const auto& t : dom_orig) {
            if (lookup(snap.omap, t) == s) {
              if (t.is_infinity()) return t;
              if (!best) best = t;
            }
          }
          return best;
        };
        std::vector<OrdinalTerm> dom_copy;
        dom_copy.push_back(kInf);
        for (const auto& v : cseq_copy.constraint.variables()) dom_copy.push_back(OrdinalTerm::var(v));
        for (const auto& s : dom_copy) {
          if (auto t = preimage(s)) {
            out.ord_renaming[s] = lookup(omap, be.ord(*t));
          }  // ambient terms keep their names
        }
        for (const auto& [x, f] : cseq_copy.context) {
          // invert the var snapshot
          for (const auto& [xo, fo] : cseq_orig.context) {
            if (lookup(snap.vmap, xo) == x) {
              out.var_renaming[x] = lookup(vmap, be.var(xo));
              break;
            }
          }
        }
      } else {
        // companion above the copied region: compose renamings
        out.companion = be.companion;
        const Sequent& cseq = g.at(be.companion).sequent;
        out.ord_renaming[kInf] = lookup(omap, be.ord(kInf));
        for (const auto& v : cseq.constraint.variables()) {
          OrdinalTerm t = OrdinalTerm::var(v);
          out.ord_renaming[t] = lookup(omap, be.ord(t));
        }
        for (const auto& [x, f] : cseq.context) out.var_renaming[x] = lookup(vmap, be.var(x));
      }
      return g.add(Node{std::move(seq), std::move(out)});
    }

    const RuleStep& rs = orig.rule_step();
    RuleInstance r = rs.rule;
    r.outer = lookup(omap, r.outer);
    r.inner = lookup(omap, r.inner);
    r.principal = lookup(vmap, r.principal);

    // reserve the node before premises so inner back edges can target it
    NodeId id = g.add(Node{seq, RuleStep{}});
    copied[src] = Snapshot{id, omap, vmap};

    ConstraintForest prem_o = o;
    if (r.kind == RuleKind::MuL || r.kind == RuleKind::NuR) {
      std::string e = r.eigen;
      if (o.contains_var(e)) e = g.fresh_ordinal(e);
      omap[OrdinalTerm::var(r.eigen)] = OrdinalTerm::var(e);
      r.eigen = e;
      prem_o = o.extend(r.outer, e);
    }

    // live destination names at this sequent, for binder collision checks
    std::set<std::string> live;
    for (const auto& [x, f] : seq.context) live.insert(x);

    std::vector<NodeId> premises;
    std::vector<std::string> bound_out = rs.rule.bound;
    for (size_t i = 0; i < rs.premises.size(); ++i) {
      VarMap vmap_i = vmap;
      std::set<std::string> assigned;
      std::vector<std::string> intro = introduced_for_premise(rs.rule, i);
      for (const auto& b : intro) {
        std::string cand = b;
        if (live.count(cand) || assigned.count(cand)) cand = g.fresh_term_var(b);
        assigned.insert(cand);
        vmap_i[b] = cand;
        // record the image in the rule's bound list
        for (size_t k = 0; k < rs.rule.bound.size(); ++k)
          if (rs.rule.bound[k] == b) bound_out[k] = cand;
      }
      premises.push_back(copy_subtree(rs.premises[i], omap, vmap_i, prem_o, copied));
    }
    r.bound = bound_out;
    g.at(id).step = RuleStep{std::move(r), std::move(premises)};
    return id;
  }

  /// Replace a back-edge leaf by one unfolding of its companion subtree.
  NodeId expand_leaf(NodeId leaf) {
    Node ln = g.at(leaf);
    const BackEdge& be = ln.back_edge();
    std::map<NodeId, Snapshot> copied;
    OrdMap omap = be.ord_renaming;
    VarMap vmap = be.var_renaming;
    NodeId id = copy_subtree(be.companion, std::move(omap), std::move(vmap),
                             ln.sequent.constraint, copied);
    if (!(g.at(id).sequent.conclusion == ln.sequent.conclusion))
      throw Error(ErrorCode::Internal, leaf, "expansion produced a different sequent");
    return id;
  }

  /// Expand the premise at `idx` of `parent` while it is a back edge.
  NodeId materialize_head(NodeId parent, size_t idx) {
    NodeId p = g.at(parent).rule_step().premises[idx];
    int guard = 0;
    while (g.at(p).is_back_edge()) {
      if (++guard > 64) throw Error(ErrorCode::Internal, p, "expansion did not reach a rule");
      p = expand_leaf(p);
      g.at(parent).rule_step().premises[idx] = p;
    }
    return p;
  }

  // ---------------------------------------------------------------------
  // Region maintenance: expand back edges whose companion is about to be
  // consumed by a rewrite, or whose renaming would break under widening or
  // substitution.

  void collect_region(NodeId root, std::set<NodeId>& out) const {
    out.insert(root);
    const Node& n = g.at(root);
    if (n.is_back_edge()) return;
    for (NodeId p : n.rule_step().premises) collect_region(p, out);
  }

  /// Expand, inside subtree(root), every back edge for which `bad` holds.
  /// Returns the new subtree root (it changes when root itself is expanded).
  template <typename Pred>
  NodeId expand_where(NodeId root, Pred bad) {
    for (int round = 0; round < 64; ++round) {
      std::set<NodeId> region;
      collect_region(root, region);
      // find one offending leaf together with its parent slot
      struct Hit {
        NodeId parent;
        size_t idx;
        NodeId leaf;
        bool at_root;
      };
      std::optional<Hit> hit;
      std::vector<NodeId> stack{root};
      if (g.at(root).is_back_edge() && bad(root, region)) hit = Hit{0, 0, root, true};
      while (!hit && !stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        if (g.at(n).is_back_edge()) continue;
        const auto& ps = g.at(n).rule_step().premises;
        for (size_t i = 0; i < ps.size(); ++i) {
          NodeId p = ps[i];
          if (g.at(p).is_back_edge()) {
            if (bad(p, region)) {
              hit = Hit{n, i, p, false};
              break;
            }
          } else {
            stack.push_back(p);
          }
        }
      }
      if (!hit) return root;
      NodeId fresh = expand_leaf(hit->leaf);
      if (hit->at_root) {
        root = fresh;
      } else {
        g.at(hit->parent).rule_step().premises[hit->idx] = fresh;
      }
    }
    throw Error(ErrorCode::Internal, root, "region expansion did not settle");
  }

  NodeId clear_zone_edges(NodeId root, const std::set<NodeId>& zone) {
    return expand_where(root, [&](NodeId leaf, const std::set<NodeId>&) {
      return zone.count(g.at(leaf).back_edge().companion) > 0;
    });
  }

  // ---------------------------------------------------------------------
  // In-place region rewrites. Regions are proof subtrees: every back edge
  // into a region starts inside it, so mutating region nodes is unobservable
  // from outside.

  /// Add `w` as a child of the root in every constraint of subtree(root).
  NodeId widen_region(NodeId root, const std::string& w) {
    root = expand_where(root, [&](NodeId leaf, const std::set<NodeId>& region) {
      const BackEdge& be = g.at(leaf).back_edge();
      return region.count(be.companion) > 0 && !(be.ord(kInf) == kInf);
    });
    std::set<NodeId> region;
    collect_region(root, region);
    for (NodeId n : region) {
      Sequent& s = g.at(n).sequent;
      s.constraint = s.constraint.extend(kInf, w);
    }
    return root;
  }

  /// subtree(root)[a := inf]; `a` must be a root child throughout the region.
  NodeId subst_region(NodeId root, const std::string& a) {
    OrdinalTerm av = OrdinalTerm::var(a);
    root = expand_where(root, [&](NodeId leaf, const std::set<NodeId>& region) {
      const BackEdge& be = g.at(leaf).back_edge();
      if (!region.count(be.companion)) return false;
      return !(be.ord(av) == av && be.ord(kInf) == kInf);
    });
    std::set<NodeId> region;
    collect_region(root, region);
    auto sub = [&](const OrdinalTerm& t) { return t == av ? kInf : t; };
    for (NodeId n : region) {
      Node& nd = g.at(n);
      Sequent& s = nd.sequent;
      if (s.constraint.contains_var(a)) s.constraint = s.constraint.contract_root_child(a);
      for (auto& [x, f] : s.context) f = f.map_ordinals(sub);
      s.conclusion = s.conclusion.map_ordinals(sub);
      if (nd.is_back_edge()) {
        BackEdge& be = nd.back_edge();
        OrdMap out;
        for (const auto& [t, img] : be.ord_renaming) {
          if (region.count(be.companion) && t == av) continue;  // domain lost a
          out[sub(t)] = sub(img);
        }
        be.ord_renaming = std::move(out);
      } else {
        RuleInstance& r = nd.rule_step().rule;
        r.outer = sub(r.outer);
        r.inner = sub(r.inner);
        if (r.eigen == a) throw Error(ErrorCode::Internal, n, "eigenvariable equals substituted variable");
      }
    }
    return root;
  }

  /// Rename ordinal variable `from` to the fresh `to` inside subtree(root).
  void rename_ordinal_region(NodeId root, const std::string& from, const std::string& to) {
    OrdinalTerm f = OrdinalTerm::var(from), t = OrdinalTerm::var(to);
    std::set<NodeId> region;
    collect_region(root, region);
    auto ren = [&](const OrdinalTerm& x) { return x == f ? t : x; };
    for (NodeId n : region) {
      Node& nd = g.at(n);
      Sequent& s = nd.sequent;
      if (s.constraint.contains_var(from))
        s.constraint = rename_constraint(s.constraint, from, to);
      for (auto& [x, ff] : s.context) ff = ff.map_ordinals(ren);
      s.conclusion = s.conclusion.map_ordinals(ren);
      if (nd.is_back_edge()) {
        BackEdge& be = nd.back_edge();
        OrdMap out;
        for (const auto& [k, img] : be.ord_renaming) out[ren(k)] = ren(img);
        be.ord_renaming = std::move(out);
      } else {
        RuleInstance& r = nd.rule_step().rule;
        r.outer = ren(r.outer);
        r.inner = ren(r.inner);
        if (r.eigen == from) r.eigen = to;
      }
    }
  }

  static ConstraintForest rename_constraint(const ConstraintForest& o, const std::string& from,
                                            const std::string& to) {
    // textual round trip keeps this simple and obviously injective
    std::string s = o.to_string();
    std::string out;
    size_t i = 0;
    while (i < s.size()) {
      if (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'') {
        size_t b = i;
        while (i < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
          ++i;
        std::string word = s.substr(b, i - b);
        out += (word == from) ? to : word;
      } else {
        out += s[i++];
      }
    }
    return ConstraintForest::parse(out);
  }

  // ---------------------------------------------------------------------
  // Plain structural copy (for contraction): identity renaming.

  NodeId copy_plain(NodeId src) {
    std::map<NodeId, Snapshot> copied;
    return copy_subtree(src, {}, {}, g.at(src).sequent.constraint, copied);
  }

  // ---------------------------------------------------------------------
  // Matching.

  struct Match {
    RewriteRuleId rule;
    int minor_idx = -1;  // index of the interacting minor premise, when any
  };

  bool is_cut(NodeId n) const {
    return !g.at(n).is_back_edge() && g.at(n).rule_step().rule.kind == RuleKind::Cut;
  }

  std::optional<Match> match_cut(NodeId cut_id) {
    const RuleInstance rule = g.at(cut_id).rule_step().rule;
    size_t k = rule.bound.size();
    NodeId main_id = materialize_head(cut_id, k);
    const RuleInstance mr = g.at(main_id).rule_step().rule;

    auto cut_var_index = [&](const std::string& v) -> int {
      for (size_t i = 0; i < k; ++i)
        if (rule.bound[i] == v) return static_cast<int>(i);
      return -1;
    };

    switch (mr.kind) {
      case RuleKind::Id:
        return Match{RewriteRuleId::IdRed, cut_var_index(mr.principal)};
      case RuleKind::Weak: {
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        return Match{RewriteRuleId::WeakRed, j};
      }
      case RuleKind::Contr: {
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        return Match{RewriteRuleId::ContrRed, j};
      }
      case RuleKind::OrL: {
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        NodeId m = materialize_head(cut_id, j);
        if (g.at(m).rule_step().rule.kind != RuleKind::OrR) return std::nullopt;
        return Match{RewriteRuleId::OrRed, j};
      }
      case RuleKind::AndL: {
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        NodeId m = materialize_head(cut_id, j);
        if (g.at(m).rule_step().rule.kind != RuleKind::AndR) return std::nullopt;
        return Match{RewriteRuleId::AndRed, j};
      }
      case RuleKind::ImpL: {
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        NodeId m = materialize_head(cut_id, j);
        if (g.at(m).rule_step().rule.kind != RuleKind::ImpR) return std::nullopt;
        return Match{RewriteRuleId::ImpRed, j};
      }
      case RuleKind::MuL: {
        if (!(mr.outer == kInf)) return std::nullopt;
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        NodeId m = materialize_head(cut_id, j);
        const RuleInstance& mir = g.at(m).rule_step().rule;
        if (mir.kind != RuleKind::MuR || !(mir.outer == kInf) || !(mir.inner == kInf))
          return std::nullopt;
        return Match{RewriteRuleId::MuRed, j};
      }
      case RuleKind::NuL: {
        if (!(mr.outer == kInf) || !(mr.inner == kInf)) return std::nullopt;
        int j = cut_var_index(mr.principal);
        if (j < 0) return std::nullopt;
        NodeId m = materialize_head(cut_id, j);
        const RuleInstance& mir = g.at(m).rule_step().rule;
        if (mir.kind != RuleKind::NuR || !(mir.outer == kInf)) return std::nullopt;
        return Match{RewriteRuleId::NuRed, j};
      }
      case RuleKind::OrR:
        return Match{RewriteRuleId::PermOrR};
      case RuleKind::AndR:
        return Match{RewriteRuleId::PermAndR};
      case RuleKind::ImpR:
        return Match{RewriteRuleId::PermImpR};
      case RuleKind::MuR:
        if (mr.outer == kInf && mr.inner == kInf) return Match{RewriteRuleId::PermMuR};
        return std::nullopt;
      case RuleKind::NuR:
        if (mr.outer == kInf) return Match{RewriteRuleId::PermNuR};
        return std::nullopt;
      case RuleKind::Cut:
        return Match{RewriteRuleId::CutMerge};
      default:
        return std::nullopt;
    }
  }

  // ---------------------------------------------------------------------
  // Lowest-redex scan. Back edges are opaque except for the head
  // materialization performed by match_cut.

  bool scan_rec(NodeId n_id, std::vector<int>& path, std::vector<Redex>* out) {
    if (g.at(n_id).is_back_edge()) return false;
    bool any = false;
    std::optional<Match> m;
    if (is_cut(n_id)) m = match_cut(n_id);  // may expand heads in place
    size_t nprem = g.at(n_id).rule_step().premises.size();
    bool inner = false;
    for (size_t i = 0; i < nprem; ++i) {
      path.push_back(static_cast<int>(i));
      inner |= scan_rec(g.at(n_id).rule_step().premises[i], path, out);
      path.pop_back();
    }
    if (m && !inner && out) out->push_back(Redex{path, m->rule});
    any = inner || m.has_value();
    return any;
  }

  std::vector<Redex> scan() {
    std::vector<int> path;
    std::vector<Redex> out;
    scan_rec(g.root, path, &out);
    std::sort(out.begin(), out.end(), [](const Redex& a, const Redex& b) {
      return std::lexicographical_compare(a.position.begin(), a.position.end(),
                                          b.position.begin(), b.position.end());
    });
    return out;
  }

  // ---------------------------------------------------------------------
  // Applying a step.

  NodeId resolve(const std::vector<int>& path) const {
    NodeId n = g.root;
    for (int i : path) {
      const Node& nd = g.at(n);
      if (nd.is_back_edge() || i < 0 ||
          static_cast<size_t>(i) >= nd.rule_step().premises.size())
        throw Error(ErrorCode::NotARedex, n, "position does not address a node");
      n = nd.rule_step().premises[i];
    }
    return n;
  }

  void replace_at(const std::vector<int>& path, NodeId fresh) {
    if (path.empty()) {
      g.root = fresh;
    } else {
      NodeId parent = g.root;
      for (size_t i = 0; i + 1 < path.size(); ++i)
        parent = g.at(parent).rule_step().premises[path[i]];
      g.at(parent).rule_step().premises[path.back()] = fresh;
    }
    if (g.at(g.root).is_back_edge()) g.root = expand_leaf(g.root);
  }

  NodeId make_cut(std::vector<std::pair<NodeId, std::string>> minors, NodeId main_id) {
    if (minors.empty()) return main_id;
    const Sequent& ms = g.at(main_id).sequent;
    Sequent seq;
    seq.constraint = ms.constraint;
    seq.conclusion = ms.conclusion;
    std::set<std::string> vars;
    RuleInstance r;
    r.kind = RuleKind::Cut;
    std::vector<NodeId> premises;
    for (auto& [id, v] : minors) {
      r.bound.push_back(v);
      vars.insert(v);
      premises.push_back(id);
      for (const auto& e : g.at(id).sequent.context) seq.context.push_back(e);
    }
    for (const auto& e : ms.context)
      if (!vars.count(e.first)) seq.context.push_back(e);
    premises.push_back(main_id);
    return g.add(Node{std::move(seq), RuleStep{std::move(r), std::move(premises)}});
  }

  /// minors of a cut node as (id, var) pairs
  std::vector<std::pair<NodeId, std::string>> cut_minors(NodeId cut_id) const {
    const RuleStep& rs = g.at(cut_id).rule_step();
    std::vector<std::pair<NodeId, std::string>> out;
    for (size_t i = 0; i < rs.rule.bound.size(); ++i)
      out.emplace_back(rs.premises[i], rs.rule.bound[i]);
    return out;
  }

  void clear_zone_for_all(std::vector<std::pair<NodeId, std::string>>& minors,
                          std::vector<NodeId*> extra, const std::set<NodeId>& zone) {
    for (auto& [id, v] : minors) id = clear_zone_edges(id, zone);
    for (NodeId* p : extra) *p = clear_zone_edges(*p, zone);
  }

  NodeId build_replacement(NodeId cut_id, const Match& m) {
    const RuleStep cut_rs = g.at(cut_id).rule_step();
    size_t k = cut_rs.rule.bound.size();
    NodeId main_id = cut_rs.premises[k];
    const RuleStep main_rs = g.at(main_id).rule_step();
    auto minors = cut_minors(cut_id);

    switch (m.rule) {
      case RewriteRuleId::IdRed: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId u = minors[0].first;
        u = clear_zone_edges(u, zone);
        return u;
      }
      case RewriteRuleId::WeakRed: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId w = main_rs.premises[0];
        auto rest = minors;
        rest.erase(rest.begin() + m.minor_idx);
        clear_zone_for_all(rest, {&w}, zone);
        return make_cut(rest, w);
      }
      case RewriteRuleId::ContrRed: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId w = main_rs.premises[0];
        auto rest = minors;
        NodeId v = rest[m.minor_idx].first;
        v = clear_zone_edges(v, zone);
        NodeId v2 = copy_plain(v);
        rest[m.minor_idx] = {v, main_rs.rule.bound[0]};
        rest.insert(rest.begin() + m.minor_idx + 1, {v2, main_rs.rule.bound[1]});
        // clear the remaining subtrees
        for (size_t i = 0; i < rest.size(); ++i) {
          if (static_cast<int>(i) == m.minor_idx || static_cast<int>(i) == m.minor_idx + 1) continue;
          rest[i].first = clear_zone_edges(rest[i].first, zone);
        }
        w = clear_zone_edges(w, zone);
        return make_cut(rest, w);
      }
      case RewriteRuleId::OrRed: {
        NodeId minor_head = minors[m.minor_idx].first;  // OrR node
        const RuleStep mh = g.at(minor_head).rule_step();
        std::set<NodeId> zone{cut_id, main_id, minor_head};
        int i = mh.rule.index;
        NodeId v = mh.premises[0];
        NodeId ui = main_rs.premises[i];
        auto rest = minors;
        rest[m.minor_idx] = {v, main_rs.rule.bound[i]};
        clear_zone_for_all(rest, {&ui}, zone);
        return make_cut(rest, ui);
      }
      case RewriteRuleId::AndRed: {
        NodeId minor_head = minors[m.minor_idx].first;  // AndR node
        const RuleStep mh = g.at(minor_head).rule_step();
        std::set<NodeId> zone{cut_id, main_id, minor_head};
        NodeId w = main_rs.premises[0];
        auto rest = minors;
        rest[m.minor_idx] = {mh.premises[0], main_rs.rule.bound[0]};
        rest.insert(rest.begin() + m.minor_idx + 1,
                    {mh.premises[1], main_rs.rule.bound[1]});
        clear_zone_for_all(rest, {&w}, zone);
        return make_cut(rest, w);
      }
      case RewriteRuleId::ImpRed: {
        NodeId minor_head = minors[m.minor_idx].first;  // ImpR node
        const RuleStep mh = g.at(minor_head).rule_step();
        std::set<NodeId> zone{cut_id, main_id, minor_head};
        NodeId v = mh.premises[0];      // body of ImpR, context x : A
        NodeId w0 = main_rs.premises[0];  // proves A
        NodeId w1 = main_rs.premises[1];  // context y : B, ...
        std::vector<std::pair<NodeId, std::string>> g0, g1;
        for (size_t i = 0; i < minors.size(); ++i) {
          if (static_cast<int>(i) == m.minor_idx) continue;
          if (g.at(w0).sequent.find(minors[i].second))
            g0.push_back(minors[i]);
          else
            g1.push_back(minors[i]);
        }
        for (auto& [id, vv] : g0) id = clear_zone_edges(id, zone);
        for (auto& [id, vv] : g1) id = clear_zone_edges(id, zone);
        v = clear_zone_edges(v, zone);
        w0 = clear_zone_edges(w0, zone);
        w1 = clear_zone_edges(w1, zone);
        NodeId inner1 = make_cut(g0, w0);
        NodeId inner2 = make_cut({{inner1, mh.rule.bound[0]}}, v);
        auto outer = g1;
        outer.emplace_back(inner2, main_rs.rule.bound[0]);
        return make_cut(outer, w1);
      }
      case RewriteRuleId::MuRed: {
        NodeId minor_head = minors[m.minor_idx].first;  // MuR(inf, inf, v)
        const RuleStep mh = g.at(minor_head).rule_step();
        std::set<NodeId> zone{cut_id, main_id, minor_head};
        NodeId v = mh.premises[0];
        NodeId w = main_rs.premises[0];
        auto rest = minors;
        rest[m.minor_idx] = {v, main_rs.rule.bound[0]};
        clear_zone_for_all(rest, {&w}, zone);
        w = subst_region(w, main_rs.rule.eigen);
        return make_cut(rest, w);
      }
      case RewriteRuleId::NuRed: {
        NodeId minor_head = minors[m.minor_idx].first;  // NuR(inf, a, v)
        const RuleStep mh = g.at(minor_head).rule_step();
        std::set<NodeId> zone{cut_id, main_id, minor_head};
        NodeId v = mh.premises[0];
        NodeId w = main_rs.premises[0];
        auto rest = minors;
        clear_zone_for_all(rest, {&v, &w}, zone);
        v = subst_region(v, mh.rule.eigen);
        rest[m.minor_idx] = {v, main_rs.rule.bound[0]};
        return make_cut(rest, w);
      }
      case RewriteRuleId::PermOrR: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId v = main_rs.premises[0];
        auto rest = minors;
        clear_zone_for_all(rest, {&v}, zone);
        NodeId inner = make_cut(rest, v);
        Sequent seq = g.at(cut_id).sequent;
        RuleInstance r;
        r.kind = RuleKind::OrR;
        r.index = main_rs.rule.index;
        return g.add(Node{std::move(seq), RuleStep{std::move(r), {inner}}});
      }
      case RewriteRuleId::PermAndR: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId v = main_rs.premises[0];
        NodeId w = main_rs.premises[1];
        std::vector<std::pair<NodeId, std::string>> gv, gw;
        for (const auto& mv : minors) {
          if (g.at(v).sequent.find(mv.second))
            gv.push_back(mv);
          else
            gw.push_back(mv);
        }
        for (auto& [id, vv] : gv) id = clear_zone_edges(id, zone);
        for (auto& [id, vv] : gw) id = clear_zone_edges(id, zone);
        v = clear_zone_edges(v, zone);
        w = clear_zone_edges(w, zone);
        NodeId c0 = make_cut(gv, v);
        NodeId c1 = make_cut(gw, w);
        Sequent seq = g.at(cut_id).sequent;
        RuleInstance r;
        r.kind = RuleKind::AndR;
        return g.add(Node{std::move(seq), RuleStep{std::move(r), {c0, c1}}});
      }
      case RewriteRuleId::PermImpR: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId v = main_rs.premises[0];
        auto rest = minors;
        clear_zone_for_all(rest, {&v}, zone);
        std::string y = main_rs.rule.bound[0];
        // avoid capturing a minor context name
        bool clash = false;
        for (const auto& [id, vv] : rest)
          for (const auto& e : g.at(id).sequent.context)
            if (e.first == y) clash = true;
        if (clash) {
          std::string y2 = g.fresh_term_var(y);
          v = rename_free_term_var(v, y, y2);
          y = y2;
        }
        NodeId inner = make_cut(rest, v);
        Sequent seq = g.at(cut_id).sequent;
        RuleInstance r;
        r.kind = RuleKind::ImpR;
        r.bound = {y};
        return g.add(Node{std::move(seq), RuleStep{std::move(r), {inner}}});
      }
      case RewriteRuleId::PermMuR: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId v = main_rs.premises[0];
        auto rest = minors;
        clear_zone_for_all(rest, {&v}, zone);
        NodeId inner = make_cut(rest, v);
        Sequent seq = g.at(cut_id).sequent;
        RuleInstance r;
        r.kind = RuleKind::MuR;
        r.outer = kInf;
        r.inner = kInf;
        return g.add(Node{std::move(seq), RuleStep{std::move(r), {inner}}});
      }
      case RewriteRuleId::PermNuR: {
        std::set<NodeId> zone{cut_id, main_id};
        NodeId v = main_rs.premises[0];
        auto rest = minors;
        clear_zone_for_all(rest, {&v}, zone);
        std::string a = main_rs.rule.eigen;
        // freshen when a occurs inside any carried minor
        bool clash = false;
        for (const auto& [id, vv] : rest) {
          std::set<NodeId> region;
          collect_region(id, region);
          for (NodeId n : region) {
            if (g.at(n).sequent.constraint.contains_var(a)) clash = true;
            if (!g.at(n).is_back_edge() && g.at(n).rule_step().rule.eigen == a) clash = true;
          }
        }
        if (clash) {
          std::string a2 = g.fresh_ordinal(a);
          rename_ordinal_region(v, a, a2);
          a = a2;
        }
        for (auto& [id, vv] : rest) id = widen_region(id, a);
        NodeId inner = make_cut(rest, v);
        Sequent seq = g.at(cut_id).sequent;
        RuleInstance r;
        r.kind = RuleKind::NuR;
        r.outer = kInf;
        r.eigen = a;
        return g.add(Node{std::move(seq), RuleStep{std::move(r), {inner}}});
      }
      case RewriteRuleId::CutMerge: {
        std::set<NodeId> zone{cut_id, main_id};
        auto inner_minors = cut_minors(main_id);
        NodeId v = main_rs.premises[main_rs.rule.bound.size()];
        // distribute outer minors to the inner premise using their variable
        std::vector<std::vector<std::pair<NodeId, std::string>>> feed(inner_minors.size());
        std::vector<std::pair<NodeId, std::string>> delta;
        for (const auto& mv : minors) {
          bool placed = false;
          for (size_t i = 0; i < inner_minors.size(); ++i) {
            if (g.at(inner_minors[i].first).sequent.find(mv.second)) {
              feed[i].push_back(mv);
              placed = true;
              break;
            }
          }
          if (!placed) delta.push_back(mv);  // lives in v's context
        }
        for (auto& group : feed)
          for (auto& [id, vv] : group) id = clear_zone_edges(id, zone);
        for (auto& [id, vv] : delta) id = clear_zone_edges(id, zone);
        for (auto& [id, vv] : inner_minors) id = clear_zone_edges(id, zone);
        v = clear_zone_edges(v, zone);
        std::vector<std::pair<NodeId, std::string>> out;
        for (size_t i = 0; i < inner_minors.size(); ++i) {
          NodeId piece = feed[i].empty() ? inner_minors[i].first
                                         : make_cut(feed[i], inner_minors[i].first);
          out.emplace_back(piece, inner_minors[i].second);
        }
        for (const auto& d : delta) out.push_back(d);
        return make_cut(out, v);
      }
    }
    throw Error(ErrorCode::Internal, cut_id, "unhandled rewrite rule");
  }

  /// Rename a free term variable inside subtree(root); in place, returns root.
  NodeId rename_free_term_var(NodeId root, const std::string& from, const std::string& to) {
    std::set<NodeId> renamed;
    rename_term_rec(root, from, to, renamed);
    // back-edge renaming keys live in the companion's namespace; fix them up
    // wherever the companion itself was renamed
    std::set<NodeId> region;
    collect_region(root, region);
    for (NodeId id : region) {
      Node& nd = g.at(id);
      if (!nd.is_back_edge()) continue;
      BackEdge& be = nd.back_edge();
      if (!renamed.count(be.companion)) continue;
      VarMap out;
      for (const auto& [k, v] : be.var_renaming) out[k == from ? to : k] = v;
      if (!be.var_renaming.count(from) && !renamed.count(id)) {
        // identity entry became non-trivial: companion's `to` maps to the
        // leaf's old name
        out[to] = from;
      }
      be.var_renaming = std::move(out);
    }
    return root;
  }

  void rename_term_rec(NodeId id, const std::string& from, const std::string& to,
                       std::set<NodeId>& renamed) {
    Node& nd = g.at(id);
    bool free_here = false;
    for (auto& [x, f] : nd.sequent.context)
      if (x == from) free_here = true;
    if (!free_here) return;
    renamed.insert(id);
    for (auto& [x, f] : nd.sequent.context)
      if (x == from) x = to;
    if (nd.is_back_edge()) {
      BackEdge& be = nd.back_edge();
      for (auto& [k, v] : be.var_renaming)
        if (v == from) v = to;
      return;
    }
    RuleInstance& r = nd.rule_step().rule;
    if (r.principal == from) r.principal = to;
    // bound names are introductions, not occurrences of `from`
    for (size_t i = 0; i < nd.rule_step().premises.size(); ++i) {
      auto intro = introduced_for_premise(r, i);
      bool shadowed = false;
      for (const auto& b : intro)
        if (b == from) shadowed = true;
      // the premise only mentions `from` when it survives into its context
      if (!shadowed) rename_term_rec(nd.rule_step().premises[i], from, to, renamed);
    }
  }

  void apply(const Redex& r) {
    NodeId cut_id = resolve(r.position);
    if (!is_cut(cut_id)) throw Error(ErrorCode::NotARedex, cut_id, "position is not a cut");
    auto m = match_cut(cut_id);
    if (!m || m->rule != r.rule)
      throw Error(ErrorCode::NotARedex, cut_id, "rule does not match at position");
    NodeId fresh = build_replacement(cut_id, *m);
    replace_at(r.position, fresh);
    compact(g);
  }
};

}  // namespace

ProofGraph subst_ordinal(const ProofGraph& u, const std::string& a) {
  if (!u.root_sequent().constraint.is_root_child(a))
    throw Error(ErrorCode::NotChildOfRoot, "variable " + a + " is not a child of inf at the root");
  Engine e(u);
  NodeId root = e.subst_region(e.g.root, a);
  e.g.root = root;
  compact(e.g);
  return std::move(e.g);
}

ProofGraph saturate_infty(const ProofGraph& u) {
  ProofGraph g = u;
  for (;;) {
    const ConstraintForest& o = g.root_sequent().constraint;
    if (o.is_trivial()) return g;
    std::string pick;
    for (const auto& v : o.variables()) {
      if (o.is_root_child(v)) {
        pick = v;
        break;
      }
    }
    if (pick.empty()) throw Error(ErrorCode::Internal, "constraint with no root child");
    g = subst_ordinal(g, pick);
  }
}

std::vector<Redex> find_redexes(const ProofGraph& u) {
  Engine e(u);
  return e.scan();
}

ProofGraph apply_step(const ProofGraph& u, const Redex& r) {
  Engine e(u);
  std::vector<Redex> rs = e.scan();
  if (std::find(rs.begin(), rs.end(), r) == rs.end())
    throw Error(ErrorCode::NotARedex, "redex is not among the lowest reducible cuts");
  e.apply(r);
  return std::move(e.g);
}

ProofGraph subtree_proof(const ProofGraph& g, NodeId n) {
  Engine e(g);
  NodeId root = e.expand_where(n, [&](NodeId leaf, const std::set<NodeId>& region) {
    return region.count(e.g.at(leaf).back_edge().companion) == 0;
  });
  e.g.root = root;
  compact(e.g);
  return std::move(e.g);
}

ProofGraph widen_with(const ProofGraph& u, const std::string& var) {
  Engine e(u);
  e.g.root = e.widen_region(e.g.root, var);
  compact(e.g);
  return std::move(e.g);
}

ProofGraph rename_context_var(const ProofGraph& u, const std::string& from, const std::string& to) {
  Engine e(u);
  e.rename_free_term_var(e.g.root, from, to);
  return std::move(e.g);
}

ReduceResult reduce(const ProofGraph& u, std::uint64_t fuel, Strategy strategy) {
  Engine e(u);
  ReduceResult out;
  std::uint64_t step = 0;
  for (;;) {
    std::vector<Redex> rs = e.scan();
    if (rs.empty()) {
      compact(e.g);
      out.proof = std::move(e.g);
      out.normal = true;
      return out;
    }
    if (fuel == 0) {
      compact(e.g);
      out.proof = std::move(e.g);
      out.normal = false;
      return out;
    }
    size_t pick = 0;
    if (strategy.perturbation != 0)
      pick = static_cast<size_t>((step * 2654435761u + strategy.perturbation) % rs.size());
    out.trace.push_back(TraceStep{rs[pick].rule, rs[pick].position});
    e.apply(rs[pick]);
    --fuel;
    ++step;
  }
}

}  // namespace fixproof
