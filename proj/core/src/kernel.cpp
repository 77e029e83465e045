#include "fixproof/kernel.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fixproof {

const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::PositivityError: return "PositivityError";
    case ErrorCode::ScopeError: return "ScopeError";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::UnknownTerm: return "UnknownTerm";
    case ErrorCode::NameClash: return "NameClash";
    case ErrorCode::NotChildOfRoot: return "NotChildOfRoot";
    case ErrorCode::ContextShape: return "ContextShape";
    case ErrorCode::ConstraintMismatch: return "ConstraintMismatch";
    case ErrorCode::SideCondition: return "SideCondition";
    case ErrorCode::EigenCondition: return "EigenCondition";
    case ErrorCode::BadPremiseCount: return "BadPremiseCount";
    case ErrorCode::SequentMismatch: return "SequentMismatch";
    case ErrorCode::CompanionNotAncestor: return "CompanionNotAncestor";
    case ErrorCode::RenamingNotMonotone: return "RenamingNotMonotone";
    case ErrorCode::RenamingIncomplete: return "RenamingIncomplete";
    case ErrorCode::NotATree: return "NotATree";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotNormal: return "NotNormal";
    case ErrorCode::NonCanonical: return "NonCanonical";
    case ErrorCode::NotARedex: return "NotARedex";
    case ErrorCode::NotStreamType: return "NotStreamType";
    case ErrorCode::MismatchedInterface: return "MismatchedInterface";
    case ErrorCode::OutOfFuel: return "OutOfFuel";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::Internal: return "Internal";
  }
  return "Error";
}

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::AxTop: return "ax_top";
    case RuleKind::Id: return "id";
    case RuleKind::OrR: return "or_r";
    case RuleKind::OrL: return "or_l";
    case RuleKind::AndR: return "and_r";
    case RuleKind::AndL: return "and_l";
    case RuleKind::ImpR: return "imp_r";
    case RuleKind::ImpL: return "imp_l";
    case RuleKind::MuR: return "mu_r";
    case RuleKind::MuL: return "mu_l";
    case RuleKind::NuR: return "nu_r";
    case RuleKind::NuL: return "nu_l";
    case RuleKind::Weak: return "weak";
    case RuleKind::Contr: return "contr";
    case RuleKind::Cut: return "cut";
  }
  return "?";
}

const Formula* Sequent::find(const std::string& name) const {
  for (const auto& [n, f] : context)
    if (n == name) return &f;
  return nullptr;
}

std::string Sequent::to_string() const {
  std::ostringstream os;
  os << constraint.to_string() << " ; ";
  bool first = true;
  for (const auto& [n, f] : context) {
    if (!first) os << ", ";
    first = false;
    os << n << " : " << print_formula(f);
  }
  os << " |- " << print_formula(conclusion);
  return os.str();
}

std::optional<Error> Sequent::well_formed() const {
  std::set<std::string> names;
  std::set<std::string> ords;
  for (const auto& [n, f] : context) {
    if (!names.insert(n).second)
      return Error(ErrorCode::ContextShape, "duplicate context variable " + n);
    if (!fixproof::well_formed(f) || f.has_free_fixvar())
      return Error(ErrorCode::PositivityError, "ill-formed context formula " + print_formula(f));
    f.collect_ordinal_vars(ords);
  }
  if (!fixproof::well_formed(conclusion) || conclusion.has_free_fixvar())
    return Error(ErrorCode::PositivityError, "ill-formed conclusion " + print_formula(conclusion));
  conclusion.collect_ordinal_vars(ords);
  for (const auto& v : ords)
    if (!constraint.contains_var(v))
      return Error(ErrorCode::UnknownTerm, "ordinal variable " + v + " missing from constraint");
  return std::nullopt;
}

std::set<std::string> free_ordinal_vars(const Sequent& s) {
  std::set<std::string> out;
  for (const auto& [n, f] : s.context) f.collect_ordinal_vars(out);
  s.conclusion.collect_ordinal_vars(out);
  return out;
}

std::string RuleInstance::to_string() const {
  std::ostringstream os;
  os << rule_kind_name(kind);
  switch (kind) {
    case RuleKind::AxTop:
    case RuleKind::AndR:
      break;
    case RuleKind::Id:
    case RuleKind::Weak:
      os << "(" << principal << ")";
      break;
    case RuleKind::OrR:
      os << "(" << index << ")";
      break;
    case RuleKind::OrL:
    case RuleKind::AndL:
    case RuleKind::Contr:
      os << "(" << principal << ", " << bound[0] << ", " << bound[1] << ")";
      break;
    case RuleKind::ImpR:
      os << "(" << bound[0] << ")";
      break;
    case RuleKind::ImpL:
      os << "(" << principal << ", " << bound[0] << ")";
      break;
    case RuleKind::MuR:
      os << "(" << outer.to_string() << ", " << inner.to_string() << ")";
      break;
    case RuleKind::MuL:
      os << "(" << outer.to_string() << ", " << eigen << ", " << principal << ", " << bound[0] << ")";
      break;
    case RuleKind::NuR:
      os << "(" << outer.to_string() << ", " << eigen << ")";
      break;
    case RuleKind::NuL:
      os << "(" << outer.to_string() << ", " << inner.to_string() << ", " << principal << ", "
         << bound[0] << ")";
      break;
    case RuleKind::Cut: {
      os << "(";
      for (size_t i = 0; i < bound.size(); ++i) {
        if (i) os << ", ";
        os << bound[i];
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Context helpers (multiset view keyed by name).

namespace {

using Ctx = std::vector<std::pair<std::string, Formula>>;

bool ctx_multiset_equal(const Ctx& a, const Ctx& b) {
  if (a.size() != b.size()) return false;
  Ctx sa = a, sb = b;
  auto lt = [](const auto& x, const auto& y) { return x.first < y.first; };
  std::sort(sa.begin(), sa.end(), lt);
  std::sort(sb.begin(), sb.end(), lt);
  for (size_t i = 0; i < sa.size(); ++i)
    if (sa[i].first != sb[i].first || !(sa[i].second == sb[i].second)) return false;
  return true;
}

Ctx ctx_remove(const Ctx& c, const std::string& name) {
  Ctx out;
  for (const auto& e : c)
    if (e.first != name) out.push_back(e);
  return out;
}

bool ctx_has(const Ctx& c, const std::string& name) {
  for (const auto& e : c)
    if (e.first == name) return true;
  return false;
}

std::optional<Error> err(ErrorCode c, const std::string& m) { return Error(c, m); }

}  // namespace

std::optional<Error> check_rule_instance(const Sequent& con, const RuleInstance& r,
                                         std::span<const Sequent> prem) {
  if (auto e = con.well_formed()) return e;
  for (const auto& p : prem)
    if (auto e = p.well_formed()) return e;

  auto expect_premises = [&](size_t n) -> std::optional<Error> {
    if (prem.size() != n)
      return err(ErrorCode::BadPremiseCount,
                 std::string(rule_kind_name(r.kind)) + " expects " + std::to_string(n) +
                     " premises, got " + std::to_string(prem.size()));
    return std::nullopt;
  };
  auto same_constraint = [&](const Sequent& p) -> std::optional<Error> {
    if (!(p.constraint == con.constraint))
      return err(ErrorCode::ConstraintMismatch, "premise constraint differs from conclusion");
    return std::nullopt;
  };
  // a premise that should be (same O, ctx, f)
  auto match_premise = [&](const Sequent& p, const Ctx& ctx, const Formula& f,
                           const ConstraintForest& o) -> std::optional<Error> {
    if (!(p.constraint == o))
      return err(ErrorCode::ConstraintMismatch, "premise constraint mismatch");
    if (!(p.conclusion == f))
      return err(ErrorCode::SequentMismatch, "premise conclusion is " + print_formula(p.conclusion) +
                                                 ", expected " + print_formula(f));
    if (!ctx_multiset_equal(p.context, ctx))
      return err(ErrorCode::SequentMismatch, "premise context mismatch");
    return std::nullopt;
  };

  switch (r.kind) {
    case RuleKind::AxTop: {
      if (auto e = expect_premises(0)) return e;
      if (!con.context.empty()) return err(ErrorCode::ContextShape, "ax_top needs an empty context");
      if (con.conclusion.kind() != Conn::Top)
        return err(ErrorCode::ShapeError, "ax_top conclusion must be T");
      return std::nullopt;
    }
    case RuleKind::Id: {
      if (auto e = expect_premises(0)) return e;
      if (con.context.size() != 1)
        return err(ErrorCode::ContextShape, "id needs a singleton context");
      if (con.context[0].first != r.principal)
        return err(ErrorCode::ContextShape, "id principal " + r.principal + " not in context");
      if (!(con.context[0].second == con.conclusion))
        return err(ErrorCode::SequentMismatch, "id context formula differs from conclusion");
      return std::nullopt;
    }
    case RuleKind::OrR: {
      if (auto e = expect_premises(1)) return e;
      if (con.conclusion.kind() != Conn::Or)
        return err(ErrorCode::ShapeError, "or_r conclusion must be a disjunction");
      if (r.index != 0 && r.index != 1) return err(ErrorCode::ShapeError, "or_r index must be 0 or 1");
      Formula want = r.index == 0 ? con.conclusion.left() : con.conclusion.right();
      return match_premise(prem[0], con.context, want, con.constraint);
    }
    case RuleKind::OrL: {
      if (auto e = expect_premises(2)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "or_l principal not in context");
      if (pf->kind() != Conn::Or) return err(ErrorCode::ShapeError, "or_l principal must be a disjunction");
      if (r.bound.size() != 2) return err(ErrorCode::ShapeError, "or_l needs two premise variables");
      Ctx rest = ctx_remove(con.context, r.principal);
      if (ctx_has(rest, r.bound[0]) || ctx_has(rest, r.bound[1]))
        return err(ErrorCode::NameClash, "or_l premise variable already in context");
      Ctx c0 = rest; c0.emplace_back(r.bound[0], pf->left());
      Ctx c1 = rest; c1.emplace_back(r.bound[1], pf->right());
      if (auto e = match_premise(prem[0], c0, con.conclusion, con.constraint)) return e;
      return match_premise(prem[1], c1, con.conclusion, con.constraint);
    }
    case RuleKind::AndR: {
      if (auto e = expect_premises(2)) return e;
      if (con.conclusion.kind() != Conn::And)
        return err(ErrorCode::ShapeError, "and_r conclusion must be a conjunction");
      if (auto e = same_constraint(prem[0])) return e;
      if (auto e = same_constraint(prem[1])) return e;
      if (!(prem[0].conclusion == con.conclusion.left()) ||
          !(prem[1].conclusion == con.conclusion.right()))
        return err(ErrorCode::SequentMismatch, "and_r premise conclusions mismatch");
      Ctx joined = prem[0].context;
      for (const auto& e : prem[1].context) {
        if (ctx_has(joined, e.first))
          return err(ErrorCode::ContextShape, "and_r premise contexts overlap on " + e.first);
        joined.push_back(e);
      }
      if (!ctx_multiset_equal(joined, con.context))
        return err(ErrorCode::SequentMismatch, "and_r premise contexts do not split the conclusion");
      return std::nullopt;
    }
    case RuleKind::AndL: {
      if (auto e = expect_premises(1)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "and_l principal not in context");
      if (pf->kind() != Conn::And) return err(ErrorCode::ShapeError, "and_l principal must be a conjunction");
      if (r.bound.size() != 2 || r.bound[0] == r.bound[1])
        return err(ErrorCode::ShapeError, "and_l needs two distinct premise variables");
      Ctx rest = ctx_remove(con.context, r.principal);
      if (ctx_has(rest, r.bound[0]) || ctx_has(rest, r.bound[1]))
        return err(ErrorCode::NameClash, "and_l premise variable already in context");
      Ctx c = rest;
      c.emplace_back(r.bound[0], pf->left());
      c.emplace_back(r.bound[1], pf->right());
      return match_premise(prem[0], c, con.conclusion, con.constraint);
    }
    case RuleKind::ImpR: {
      if (auto e = expect_premises(1)) return e;
      if (con.conclusion.kind() != Conn::Imp)
        return err(ErrorCode::ShapeError, "imp_r conclusion must be an implication");
      if (r.bound.size() != 1) return err(ErrorCode::ShapeError, "imp_r needs one premise variable");
      if (ctx_has(con.context, r.bound[0]))
        return err(ErrorCode::NameClash, "imp_r premise variable already in context");
      Ctx c = con.context;
      c.emplace_back(r.bound[0], con.conclusion.left());
      return match_premise(prem[0], c, con.conclusion.right(), con.constraint);
    }
    case RuleKind::ImpL: {
      if (auto e = expect_premises(2)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "imp_l principal not in context");
      if (pf->kind() != Conn::Imp) return err(ErrorCode::ShapeError, "imp_l principal must be an implication");
      if (r.bound.size() != 1) return err(ErrorCode::ShapeError, "imp_l needs one premise variable");
      if (auto e = same_constraint(prem[0])) return e;
      if (auto e = same_constraint(prem[1])) return e;
      if (!(prem[0].conclusion == pf->left()))
        return err(ErrorCode::SequentMismatch, "imp_l first premise must prove the antecedent");
      if (!(prem[1].conclusion == con.conclusion))
        return err(ErrorCode::SequentMismatch, "imp_l second premise conclusion mismatch");
      const Formula* bf = nullptr;
      for (const auto& e : prem[1].context)
        if (e.first == r.bound[0]) bf = &e.second;
      if (!bf || !(*bf == pf->right()))
        return err(ErrorCode::SequentMismatch, "imp_l second premise lacks " + r.bound[0]);
      Ctx rest = ctx_remove(con.context, r.principal);
      Ctx joined = prem[0].context;
      for (const auto& e : ctx_remove(prem[1].context, r.bound[0])) {
        if (ctx_has(joined, e.first))
          return err(ErrorCode::ContextShape, "imp_l premise contexts overlap on " + e.first);
        joined.push_back(e);
      }
      if (!ctx_multiset_equal(joined, rest))
        return err(ErrorCode::SequentMismatch, "imp_l premise contexts do not split the conclusion");
      return std::nullopt;
    }
    case RuleKind::MuR: {
      if (auto e = expect_premises(1)) return e;
      if (con.conclusion.kind() != Conn::Mu)
        return err(ErrorCode::ShapeError, "mu_r conclusion must be a mu formula");
      if (!(con.conclusion.annotation() == r.outer))
        return err(ErrorCode::ShapeError, "mu_r outer annotation mismatch");
      try {
        if (!con.constraint.entails(r.inner, r.outer))
          return err(ErrorCode::SideCondition,
                     "mu_r requires " + r.inner.to_string() + " < " + r.outer.to_string());
      } catch (const Error& e) {
        return e;
      }
      return match_premise(prem[0], con.context, unfold_fixpoint(con.conclusion, r.inner),
                           con.constraint);
    }
    case RuleKind::NuL: {
      if (auto e = expect_premises(1)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "nu_l principal not in context");
      if (pf->kind() != Conn::Nu) return err(ErrorCode::ShapeError, "nu_l principal must be a nu formula");
      if (!(pf->annotation() == r.outer))
        return err(ErrorCode::ShapeError, "nu_l outer annotation mismatch");
      if (r.bound.size() != 1) return err(ErrorCode::ShapeError, "nu_l needs one premise variable");
      try {
        if (!con.constraint.entails(r.inner, r.outer))
          return err(ErrorCode::SideCondition,
                     "nu_l requires " + r.inner.to_string() + " < " + r.outer.to_string());
      } catch (const Error& e) {
        return e;
      }
      Ctx rest = ctx_remove(con.context, r.principal);
      if (ctx_has(rest, r.bound[0]))
        return err(ErrorCode::NameClash, "nu_l premise variable already in context");
      Ctx c = rest;
      c.emplace_back(r.bound[0], unfold_fixpoint(*pf, r.inner));
      return match_premise(prem[0], c, con.conclusion, con.constraint);
    }
    case RuleKind::MuL: {
      if (auto e = expect_premises(1)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "mu_l principal not in context");
      if (pf->kind() != Conn::Mu) return err(ErrorCode::ShapeError, "mu_l principal must be a mu formula");
      if (!(pf->annotation() == r.outer))
        return err(ErrorCode::ShapeError, "mu_l outer annotation mismatch");
      if (r.eigen.empty() || con.constraint.contains_var(r.eigen))
        return err(ErrorCode::EigenCondition, "mu_l eigenvariable occurs in the conclusion");
      if (r.bound.size() != 1) return err(ErrorCode::ShapeError, "mu_l needs one premise variable");
      ConstraintForest o2;
      try {
        o2 = con.constraint.extend(r.outer, r.eigen);
      } catch (const Error& e) {
        return e;
      }
      Ctx rest = ctx_remove(con.context, r.principal);
      if (ctx_has(rest, r.bound[0]))
        return err(ErrorCode::NameClash, "mu_l premise variable already in context");
      Ctx c = rest;
      c.emplace_back(r.bound[0], unfold_fixpoint(*pf, OrdinalTerm::var(r.eigen)));
      return match_premise(prem[0], c, con.conclusion, o2);
    }
    case RuleKind::NuR: {
      if (auto e = expect_premises(1)) return e;
      if (con.conclusion.kind() != Conn::Nu)
        return err(ErrorCode::ShapeError, "nu_r conclusion must be a nu formula");
      if (!(con.conclusion.annotation() == r.outer))
        return err(ErrorCode::ShapeError, "nu_r outer annotation mismatch");
      if (r.eigen.empty() || con.constraint.contains_var(r.eigen))
        return err(ErrorCode::EigenCondition, "nu_r eigenvariable occurs in the conclusion");
      ConstraintForest o2;
      try {
        o2 = con.constraint.extend(r.outer, r.eigen);
      } catch (const Error& e) {
        return e;
      }
      return match_premise(prem[0], con.context,
                           unfold_fixpoint(con.conclusion, OrdinalTerm::var(r.eigen)), o2);
    }
    case RuleKind::Weak: {
      if (auto e = expect_premises(1)) return e;
      if (!con.find(r.principal)) return err(ErrorCode::ContextShape, "weak principal not in context");
      return match_premise(prem[0], ctx_remove(con.context, r.principal), con.conclusion,
                           con.constraint);
    }
    case RuleKind::Contr: {
      if (auto e = expect_premises(1)) return e;
      const Formula* pf = con.find(r.principal);
      if (!pf) return err(ErrorCode::ContextShape, "contr principal not in context");
      if (r.bound.size() != 2 || r.bound[0] == r.bound[1])
        return err(ErrorCode::ShapeError, "contr needs two distinct premise variables");
      Ctx rest = ctx_remove(con.context, r.principal);
      if (ctx_has(rest, r.bound[0]) || ctx_has(rest, r.bound[1]))
        return err(ErrorCode::NameClash, "contr premise variable already in context");
      Ctx c = rest;
      c.emplace_back(r.bound[0], *pf);
      c.emplace_back(r.bound[1], *pf);
      return match_premise(prem[0], c, con.conclusion, con.constraint);
    }
    case RuleKind::Cut: {
      size_t n = r.bound.size();
      if (n < 1) return err(ErrorCode::ShapeError, "cut needs at least one cut formula");
      if (auto e = expect_premises(n + 1)) return e;
      for (const auto& p : prem)
        if (auto e = same_constraint(p)) return e;
      const Sequent& main = prem[n];
      if (!(main.conclusion == con.conclusion))
        return err(ErrorCode::SequentMismatch, "cut main premise conclusion mismatch");
      std::set<std::string> zs(r.bound.begin(), r.bound.end());
      if (zs.size() != n) return err(ErrorCode::NameClash, "cut variables must be distinct");
      for (size_t i = 0; i < n; ++i) {
        const Formula* zf = main.find(r.bound[i]);
        if (!zf)
          return err(ErrorCode::SequentMismatch, "cut variable " + r.bound[i] + " missing from main premise");
        if (!(*zf == prem[i].conclusion))
          return err(ErrorCode::SequentMismatch,
                     "cut formula mismatch for variable " + r.bound[i]);
      }
      Ctx joined;
      for (size_t i = 0; i < n; ++i)
        for (const auto& e : prem[i].context) {
          if (ctx_has(joined, e.first))
            return err(ErrorCode::ContextShape, "cut premise contexts overlap on " + e.first);
          joined.push_back(e);
        }
      for (const auto& e : main.context) {
        if (zs.count(e.first)) continue;
        if (ctx_has(joined, e.first))
          return err(ErrorCode::ContextShape, "cut premise contexts overlap on " + e.first);
        joined.push_back(e);
      }
      if (!ctx_multiset_equal(joined, con.context))
        return err(ErrorCode::SequentMismatch, "cut contexts do not split the conclusion");
      return std::nullopt;
    }
  }
  return err(ErrorCode::Internal, "unhandled rule kind");
}

// ---------------------------------------------------------------------------

bool is_proper_ancestor(const ProofGraph& g, NodeId anc, NodeId node) {
  // parent map over premise links
  std::vector<NodeId> parent(g.size(), static_cast<NodeId>(-1));
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.at(i).is_back_edge()) continue;
    for (NodeId p : g.at(i).rule_step().premises) {
      if (p < g.size()) parent[p] = i;
    }
  }
  NodeId cur = node;
  size_t steps = 0;
  while (parent[cur] != static_cast<NodeId>(-1) && steps++ <= g.size()) {
    cur = parent[cur];
    if (cur == anc) return true;
  }
  return false;
}

namespace {

Sequent rename_sequent(const Sequent& s, const BackEdge& be, const ConstraintForest& leaf_o) {
  Sequent out;
  out.constraint = leaf_o;
  auto mapord = [&](const OrdinalTerm& t) { return be.ord(t); };
  for (const auto& [n, f] : s.context)
    out.context.emplace_back(be.var(n), f.map_ordinals(mapord));
  out.conclusion = s.conclusion.map_ordinals(mapord);
  return out;
}

std::optional<Error> check_back_edge(const ProofGraph& g, NodeId leaf) {
  const Node& ln = g.at(leaf);
  const BackEdge& be = ln.back_edge();
  if (be.companion >= g.size())
    return Error(ErrorCode::CompanionNotAncestor, leaf, "companion id out of range");
  if (!is_proper_ancestor(g, be.companion, leaf))
    return Error(ErrorCode::CompanionNotAncestor, leaf,
                 "companion " + std::to_string(be.companion) + " is not a proper ancestor");
  const Sequent& cs = g.at(be.companion).sequent;
  const ConstraintForest& lo = ln.sequent.constraint;

  // Renaming must land inside the leaf constraint; sigma(inf) is inf or a var.
  std::vector<OrdinalTerm> dom;
  dom.push_back(OrdinalTerm::infinity());
  for (const auto& v : cs.constraint.variables()) dom.push_back(OrdinalTerm::var(v));
  for (const auto& t : dom) {
    OrdinalTerm img = be.ord(t);
    if (!lo.contains(img))
      return Error(ErrorCode::RenamingIncomplete, leaf,
                   "renaming image " + img.to_string() + " not in leaf constraint");
  }
  for (const auto& [t, img] : be.ord_renaming) {
    if (!cs.constraint.contains(t))
      return Error(ErrorCode::RenamingIncomplete, leaf,
                   "renaming domain term " + t.to_string() + " not in companion constraint");
  }

  // Strict order preservation, excluding the (inf, inf) pair.
  for (const auto& x : dom) {
    for (const auto& y : dom) {
      if (x.is_infinity() && y.is_infinity()) continue;
      if (cs.constraint.entails(x, y) && !lo.entails(be.ord(x), be.ord(y)))
        return Error(ErrorCode::RenamingNotMonotone, leaf,
                     "renaming does not preserve " + x.to_string() + " < " + y.to_string());
    }
  }

  Sequent expected = rename_sequent(cs, be, lo);
  Sequent actual = ln.sequent;
  if (!(expected.conclusion == actual.conclusion) ||
      !ctx_multiset_equal(expected.context, actual.context))
    return Error(ErrorCode::SequentMismatch, leaf,
                 "renamed companion sequent (" + expected.to_string() +
                     ") differs from leaf sequent (" + actual.to_string() + ")");
  return std::nullopt;
}

}  // namespace

std::optional<Error> check_graph(const ProofGraph& g) {
  if (g.nodes.empty()) return Error(ErrorCode::NotATree, "empty graph");
  if (g.root >= g.size()) return Error(ErrorCode::NotATree, "root id out of range");

  // Premise links form a tree rooted at root.
  std::vector<int> indeg(g.size(), 0);
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.at(i).is_back_edge()) continue;
    for (NodeId p : g.at(i).rule_step().premises) {
      if (p >= g.size()) return Error(ErrorCode::NotATree, i, "premise id out of range");
      indeg[p]++;
    }
  }
  if (indeg[g.root] != 0) return Error(ErrorCode::NotATree, g.root, "root has a parent");
  for (NodeId i = 0; i < g.size(); ++i) {
    if (i == g.root) continue;
    if (indeg[i] != 1)
      return Error(ErrorCode::NotATree, i,
                   "node has " + std::to_string(indeg[i]) + " parents");
  }
  // reachability (also rejects premise cycles: tree in-degrees + reachability)
  std::vector<bool> seen(g.size(), false);
  std::vector<NodeId> stack{g.root};
  seen[g.root] = true;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (g.at(n).is_back_edge()) continue;
    for (NodeId p : g.at(n).rule_step().premises) {
      if (!seen[p]) {
        seen[p] = true;
        stack.push_back(p);
      }
    }
  }
  for (NodeId i = 0; i < g.size(); ++i)
    if (!seen[i]) return Error(ErrorCode::NotATree, i, "node unreachable from root");

  for (NodeId i = 0; i < g.size(); ++i) {
    const Node& n = g.at(i);
    if (n.is_back_edge()) {
      if (auto e = check_back_edge(g, i)) return e;
      continue;
    }
    std::vector<Sequent> prem;
    prem.reserve(n.rule_step().premises.size());
    for (NodeId p : n.rule_step().premises) prem.push_back(g.at(p).sequent);
    if (auto e = check_rule_instance(n.sequent, n.rule_step().rule, prem))
      return Error(e->code(), i, e->what());
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Unfolding.

namespace {

struct Unfolder {
  const ProofGraph& g;
  std::set<std::string> taken;  // every name ever used, to keep copies apart
  std::uint64_t fresh = 0;

  std::string fresh_ordinal(const std::string& base) {
    std::string stem = base.empty() ? "a" : base;
    while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    if (stem.empty()) stem = "a";
    for (;;) {
      std::string cand = stem + std::to_string(++fresh);
      if (taken.insert(cand).second) return cand;
    }
  }

  Derivation expand(NodeId id, std::map<OrdinalTerm, OrdinalTerm> omap,
                    std::map<std::string, std::string> vmap, ConstraintForest o, unsigned depth) {
    const Node& n = g.at(id);
    auto ord = [&](const OrdinalTerm& t) {
      auto it = omap.find(t);
      return it == omap.end() ? t : it->second;
    };
    auto var = [&](const std::string& v) {
      auto it = vmap.find(v);
      return it == vmap.end() ? v : it->second;
    };

    if (n.is_back_edge()) {
      const BackEdge& be = n.back_edge();
      // compose renamings: companion term -> this frame
      std::map<OrdinalTerm, OrdinalTerm> omap2;
      const Sequent& cs = g.at(be.companion).sequent;
      omap2[OrdinalTerm::infinity()] = ord(be.ord(OrdinalTerm::infinity()));
      for (const auto& v : cs.constraint.variables()) {
        OrdinalTerm t = OrdinalTerm::var(v);
        omap2[t] = ord(be.ord(t));
      }
      std::map<std::string, std::string> vmap2;
      for (const auto& [cn, cf] : cs.context) vmap2[cn] = var(be.var(cn));
      return expand(be.companion, std::move(omap2), std::move(vmap2), std::move(o), depth);
    }

    Derivation out;
    out.sequent.constraint = o;
    for (const auto& [cn, cf] : n.sequent.context)
      out.sequent.context.emplace_back(var(cn), cf.map_ordinals(ord));
    out.sequent.conclusion = n.sequent.conclusion.map_ordinals(ord);
    if (depth == 0) return out;

    RuleInstance r = n.rule_step().rule;
    r.outer = ord(r.outer);
    r.inner = ord(r.inner);
    r.principal = var(r.principal);
    for (auto& b : r.bound) b = var(b);
    ConstraintForest prem_o = o;
    if (r.kind == RuleKind::MuL || r.kind == RuleKind::NuR) {
      std::string e2 = r.eigen;
      if (o.contains_var(e2)) e2 = fresh_ordinal(r.eigen);
      taken.insert(e2);
      omap[OrdinalTerm::var(r.eigen)] = OrdinalTerm::var(e2);
      r.eigen = e2;
      prem_o = o.extend(r.outer, e2);
    }
    out.rule = r;
    for (NodeId p : n.rule_step().premises)
      out.premises.push_back(expand(p, omap, vmap, prem_o, depth - 1));
    return out;
  }
};

}  // namespace

Derivation unfold_prefix(const ProofGraph& g, unsigned depth) {
  Unfolder u{g, g.ordinal_names(), 0};
  return u.expand(g.root, {}, {}, g.root_sequent().constraint, depth);
}

std::optional<Error> check_derivation(const Derivation& d) {
  if (!d.rule) return std::nullopt;  // cut off leaf
  std::vector<Sequent> prem;
  prem.reserve(d.premises.size());
  for (const auto& p : d.premises) prem.push_back(p.sequent);
  if (auto e = check_rule_instance(d.sequent, *d.rule, prem)) return e;
  for (const auto& p : d.premises)
    if (auto e = check_derivation(p)) return e;
  return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string ProofGraph::fresh_ordinal(const std::string& base) {
  std::set<std::string> used = ordinal_names();
  std::string stem = base.empty() ? "a" : base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "a";
  for (;;) {
    std::string cand = stem + std::to_string(++counter);
    if (!used.count(cand)) return cand;
  }
}

std::string ProofGraph::fresh_term_var(const std::string& base) {
  std::set<std::string> used = term_var_names();
  std::string stem = base.empty() ? "v" : base;
  while (!stem.empty() && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
  if (stem.empty()) stem = "v";
  for (;;) {
    std::string cand = stem + std::to_string(++counter);
    if (!used.count(cand)) return cand;
  }
}

std::set<std::string> ProofGraph::ordinal_names() const {
  std::set<std::string> out;
  for (const auto& n : nodes) {
    for (const auto& v : n.sequent.constraint.variables()) out.insert(v);
    if (!n.is_back_edge()) {
      const RuleInstance& r = n.rule_step().rule;
      if (r.outer.is_var()) out.insert(r.outer.name());
      if (r.inner.is_var()) out.insert(r.inner.name());
      if (!r.eigen.empty()) out.insert(r.eigen);
    }
  }
  return out;
}

std::set<std::string> ProofGraph::term_var_names() const {
  std::set<std::string> out;
  for (const auto& n : nodes) {
    for (const auto& [v, f] : n.sequent.context) out.insert(v);
    if (!n.is_back_edge()) {
      const RuleInstance& r = n.rule_step().rule;
      if (!r.principal.empty()) out.insert(r.principal);
      for (const auto& b : r.bound) out.insert(b);
    }
  }
  return out;
}

NodeId graft(ProofGraph& dst, const ProofGraph& src) {
  NodeId offset = static_cast<NodeId>(dst.nodes.size());
  for (const Node& n : src.nodes) {
    Node copy = n;
    if (copy.is_back_edge()) {
      copy.back_edge().companion += offset;
    } else {
      for (NodeId& p : copy.rule_step().premises) p += offset;
    }
    dst.nodes.push_back(std::move(copy));
  }
  dst.counter = std::max(dst.counter, src.counter);
  return src.root + offset;
}

void compact(ProofGraph& g) {
  std::vector<NodeId> order;
  std::vector<NodeId> remap(g.size(), static_cast<NodeId>(-1));
  std::vector<NodeId> stack{g.root};
  std::vector<bool> seen(g.size(), false);
  seen[g.root] = true;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    order.push_back(n);
    if (g.at(n).is_back_edge()) continue;
    const auto& ps = g.at(n).rule_step().premises;
    for (auto it = ps.rbegin(); it != ps.rend(); ++it) {
      if (!seen[*it]) {
        seen[*it] = true;
        stack.push_back(*it);
      }
    }
  }
  for (NodeId i = 0; i < order.size(); ++i) remap[order[i]] = i;
  std::vector<Node> nodes;
  nodes.reserve(order.size());
  for (NodeId old : order) {
    Node n = std::move(g.at(old));
    if (n.is_back_edge()) {
      NodeId c = n.back_edge().companion;
      if (c >= remap.size() || remap[c] == static_cast<NodeId>(-1))
        throw Error(ErrorCode::Internal, "compaction dropped a companion node");
      n.back_edge().companion = remap[c];
    } else {
      for (NodeId& p : n.rule_step().premises) p = remap[p];
    }
    nodes.push_back(std::move(n));
  }
  g.nodes = std::move(nodes);
  g.root = remap[g.root];
}

}  // namespace fixproof
