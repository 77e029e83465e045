#ifndef FIXPROOF_KERNEL_HPP
#define FIXPROOF_KERNEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "fixproof/constraints.hpp"
#include "fixproof/formula.hpp"

namespace fixproof {

using NodeId = std::uint32_t;

struct Sequent {
  ConstraintForest constraint;
  std::vector<std::pair<std::string, Formula>> context;
  Formula conclusion;

  bool operator==(const Sequent&) const = default;

  const Formula* find(const std::string& name) const;
  bool closed() const { return constraint.is_trivial() && context.empty(); }
  std::string to_string() const;

  /// Distinct context names, well-formed formulas, ordinal variables all
  /// present in the constraint.
  std::optional<Error> well_formed() const;
};

std::set<std::string> free_ordinal_vars(const Sequent& s);

enum class RuleKind {
  AxTop, Id, OrR, OrL, AndR, AndL, ImpR, ImpL,
  MuR, MuL, NuR, NuL, Weak, Contr, Cut,
};

const char* rule_kind_name(RuleKind k);

/// One rule instance in the Fig 3-4 named-variable presentation. Field use
/// depends on the kind:
///   OrR: index (0|1).              Id/Weak: principal.
///   OrL/AndL/Contr: principal, bound = {z0, z1}.
///   ImpR: bound = {y}.             ImpL: principal, bound = {y}.
///   MuR/NuL: outer, inner (NuL also principal, bound = {z}).
///   MuL: outer, eigen, principal, bound = {z}.   NuR: outer, eigen.
///   Cut: bound = z1..zn.
struct RuleInstance {
  RuleKind kind = RuleKind::AxTop;
  int index = 0;
  OrdinalTerm outer;
  OrdinalTerm inner;
  std::string eigen;
  std::string principal;
  std::vector<std::string> bound;

  bool operator==(const RuleInstance&) const = default;
  std::string to_string() const;
};

struct RuleStep {
  RuleInstance rule;
  std::vector<NodeId> premises;
};

/// A back edge: continue at `companion`, renaming ordinal terms of the
/// companion sequent by `ord_renaming` and context variables by
/// `var_renaming` (missing entries mean identity).
struct BackEdge {
  NodeId companion = 0;
  std::map<OrdinalTerm, OrdinalTerm> ord_renaming;
  std::map<std::string, std::string> var_renaming;

  OrdinalTerm ord(const OrdinalTerm& t) const {
    auto it = ord_renaming.find(t);
    return it == ord_renaming.end() ? t : it->second;
  }
  std::string var(const std::string& v) const {
    auto it = var_renaming.find(v);
    return it == var_renaming.end() ? v : it->second;
  }
};

struct Node {
  Sequent sequent;
  std::variant<RuleStep, BackEdge> step;

  bool is_back_edge() const { return std::holds_alternative<BackEdge>(step); }
  const RuleStep& rule_step() const { return std::get<RuleStep>(step); }
  RuleStep& rule_step() { return std::get<RuleStep>(step); }
  const BackEdge& back_edge() const { return std::get<BackEdge>(step); }
  BackEdge& back_edge() { return std::get<BackEdge>(step); }
};

/// A finite cyclic proof: nodes addressed by id, premise links forming a tree
/// rooted at `root`, back edges pointing to proper ancestors.
struct ProofGraph {
  std::vector<Node> nodes;
  NodeId root = 0;
  std::uint64_t counter = 0;  // fresh-name generation state

  NodeId add(Node n) {
    nodes.push_back(std::move(n));
    return static_cast<NodeId>(nodes.size() - 1);
  }
  const Node& at(NodeId id) const { return nodes.at(id); }
  Node& at(NodeId id) { return nodes.at(id); }
  size_t size() const { return nodes.size(); }

  const Sequent& root_sequent() const { return nodes.at(root).sequent; }

  std::string fresh_ordinal(const std::string& base);
  std::string fresh_term_var(const std::string& base);

  std::set<std::string> ordinal_names() const;
  std::set<std::string> term_var_names() const;
};

/// Schema check for one rule application.
std::optional<Error> check_rule_instance(const Sequent& conclusion, const RuleInstance& rule,
                                         std::span<const Sequent> premises);

/// Whole-graph check: tree shape, per-node rule checks, back-edge conditions.
std::optional<Error> check_graph(const ProofGraph& g);

/// Finite prefix of the represented infinite derivation. Leaves cut off at
/// the depth bound carry no rule.
struct Derivation {
  Sequent sequent;
  std::optional<RuleInstance> rule;
  std::vector<Derivation> premises;
};

Derivation unfold_prefix(const ProofGraph& g, unsigned depth);

/// Checks every rule instance in an unfolded prefix (test support).
std::optional<Error> check_derivation(const Derivation& d);

// -- construction helpers ----------------------------------------------------

/// Copies `src` into `dst` (fresh ids), returning the id of the copied root.
NodeId graft(ProofGraph& dst, const ProofGraph& src);

/// Drop nodes unreachable from the root and renumber.
void compact(ProofGraph& g);

/// Ancestor test along premise links. True when `anc` is a proper ancestor
/// of `node`.
bool is_proper_ancestor(const ProofGraph& g, NodeId anc, NodeId node);

}  // namespace fixproof

#endif
