#ifndef FIXPROOF_REWRITE_HPP
#define FIXPROOF_REWRITE_HPP

#include <cstdint>
#include <vector>

#include "fixproof/kernel.hpp"

namespace fixproof {

/// The cut rewrite rules: eight reductions, five right permutations, and the
/// merge of a cut whose main premise is again a cut. The merge is the step
/// that flattens nested cuts over closed arguments; stream evaluation cannot
/// make progress without it.
enum class RewriteRuleId {
  OrRed, AndRed, ImpRed, MuRed, NuRed, IdRed, ContrRed, WeakRed,
  PermOrR, PermAndR, PermImpR, PermMuR, PermNuR,
  CutMerge,
};

const char* rewrite_rule_name(RewriteRuleId r);

/// A redex: the premise-index path from the root to a cut node, plus the rule
/// that matches there. Positions refer to the graph after the head-expansions
/// performed while matching (back edges are unfolded one step when a pattern
/// needs to inspect a rule under them); on back-edge-free proofs they refer
/// to the input unchanged.
struct Redex {
  std::vector<int> position;
  RewriteRuleId rule = RewriteRuleId::IdRed;

  bool operator==(const Redex&) const = default;
};

/// u[a := inf]: contract `a` into the root of every constraint, re-annotate
/// fixpoint rules, compose back-edge renamings. Requires `a` to be a child of
/// the root in u's root constraint (NotChildOfRoot).
ProofGraph subst_ordinal(const ProofGraph& u, const std::string& a);

/// Repeated subst_ordinal until the root constraint is trivial.
ProofGraph saturate_infty(const ProofGraph& u);

/// All lowest reducible cuts, leftmost-outermost order.
std::vector<Redex> find_redexes(const ProofGraph& u);

/// One rewrite step at `r`; throws NotARedex when r is not in find_redexes(u).
ProofGraph apply_step(const ProofGraph& u, const Redex& r);

struct TraceStep {
  RewriteRuleId rule;
  std::vector<int> position;
};

struct ReduceResult {
  ProofGraph proof;
  bool normal = false;
  std::vector<TraceStep> trace;
};

/// Redex selection; 0 picks the leftmost-outermost redex, other values pick a
/// pseudo-random eligible redex per step (used to exercise confluence).
struct Strategy {
  std::uint32_t perturbation = 0;
};

/// Fueled multi-step reduction; Normal when no redex remains.
ReduceResult reduce(const ProofGraph& u, std::uint64_t fuel, Strategy strategy = {});

/// Extract subtree(n) of g as a standalone proof, expanding back edges whose
/// companions lie outside the subtree.
ProofGraph subtree_proof(const ProofGraph& g, NodeId n);

/// Add `var` as a child of the root in every constraint of the proof.
/// Weakening constraints never invalidates side conditions.
ProofGraph widen_with(const ProofGraph& u, const std::string& var);

/// Rename a free context variable of the root sequent throughout the proof.
ProofGraph rename_context_var(const ProofGraph& u, const std::string& from, const std::string& to);

}  // namespace fixproof

#endif
