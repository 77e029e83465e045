#include "fixproof/algebra.hpp"

#include <functional>
#include <set>

namespace fixproof {

namespace {

const OrdinalTerm kInf = OrdinalTerm::infinity();

NodeId add_rule(ProofGraph& g, Sequent seq, RuleInstance r, std::vector<NodeId> prem) {
  return g.add(Node{std::move(seq), RuleStep{std::move(r), std::move(prem)}});
}

NodeId add_id(ProofGraph& g, const ConstraintForest& o, const std::string& x, const Formula& f) {
  RuleInstance r;
  r.kind = RuleKind::Id;
  r.principal = x;
  return add_rule(g, Sequent{o, {{x, f}}, f}, std::move(r), {});
}

/// Builds a proof of  O | ctx : body[from/X] |- body[to/X]  by structural
/// recursion on the functor body. `embed` supplies the proof for the X case,
/// with a caller-chosen context variable name.
NodeId lift_rec(ProofGraph& g, const Formula& body, const Formula& from, const Formula& to,
                const ConstraintForest& o, const std::string& ctx,
                const std::function<NodeId(const std::string&)>& embed) {
  if (!body.has_free_fixvar()) return add_id(g, o, ctx, body);
  if (body.kind() == Conn::Fix) return embed(ctx);

  Formula fsrc = body.subst_fixvar(from);
  Formula fdst = body.subst_fixvar(to);
  switch (body.kind()) {
    case Conn::And: {
      std::string c0 = ctx + "0", c1 = ctx + "1";
      Formula l_src = body.left().subst_fixvar(from), r_src = body.right().subst_fixvar(from);
      NodeId p0 = lift_rec(g, body.left(), from, to, o, c0, embed);
      NodeId p1 = lift_rec(g, body.right(), from, to, o, c1, embed);
      RuleInstance andr;
      andr.kind = RuleKind::AndR;
      NodeId mid = add_rule(g, Sequent{o, {{c0, l_src}, {c1, r_src}}, fdst}, std::move(andr),
                            {p0, p1});
      RuleInstance andl;
      andl.kind = RuleKind::AndL;
      andl.principal = ctx;
      andl.bound = {c0, c1};
      return add_rule(g, Sequent{o, {{ctx, fsrc}}, fdst}, std::move(andl), {mid});
    }
    case Conn::Or: {
      std::string c0 = ctx + "0", c1 = ctx + "1";
      Formula l_src = body.left().subst_fixvar(from), r_src = body.right().subst_fixvar(from);
      NodeId p0 = lift_rec(g, body.left(), from, to, o, c0, embed);
      NodeId p1 = lift_rec(g, body.right(), from, to, o, c1, embed);
      RuleInstance or0;
      or0.kind = RuleKind::OrR;
      or0.index = 0;
      NodeId w0 = add_rule(g, Sequent{o, {{c0, l_src}}, fdst}, std::move(or0), {p0});
      RuleInstance or1;
      or1.kind = RuleKind::OrR;
      or1.index = 1;
      NodeId w1 = add_rule(g, Sequent{o, {{c1, r_src}}, fdst}, std::move(or1), {p1});
      RuleInstance orl;
      orl.kind = RuleKind::OrL;
      orl.principal = ctx;
      orl.bound = {c0, c1};
      return add_rule(g, Sequent{o, {{ctx, fsrc}}, fdst}, std::move(orl), {w0, w1});
    }
    case Conn::Imp: {
      // antecedent has no free X by strict positivity
      std::string arg = ctx + "a", res = ctx + "b";
      Formula ante = body.left();
      Formula r_src = body.right().subst_fixvar(from);
      NodeId parg = add_id(g, o, arg, ante);
      NodeId pres = lift_rec(g, body.right(), from, to, o, res, embed);
      RuleInstance impl;
      impl.kind = RuleKind::ImpL;
      impl.principal = ctx;
      impl.bound = {res};
      NodeId mid = add_rule(g, Sequent{o, {{arg, ante}, {ctx, fsrc}}, body.right().subst_fixvar(to)},
                            std::move(impl), {parg, pres});
      RuleInstance impr;
      impr.kind = RuleKind::ImpR;
      impr.bound = {arg};
      return add_rule(g, Sequent{o, {{ctx, fsrc}}, fdst}, std::move(impr), {mid});
    }
    default:
      throw Error(ErrorCode::Internal, "unexpected functor body shape");
  }
}

}  // namespace

ProofGraph lift_functor(const FunctorBody& a, const ProofGraph& u) {
  const Sequent& us = u.root_sequent();
  if (us.context.size() != 1)
    throw Error(ErrorCode::ArityMismatch, "lift_functor expects a one-hypothesis arrow");
  ProofGraph g;
  auto embed = [&](const std::string& ctx) -> NodeId {
    ProofGraph u2 = rename_context_var(u, u.root_sequent().context[0].first, ctx);
    return graft(g, u2);
  };
  g.root = lift_rec(g, a.body, us.context[0].second, us.conclusion, us.constraint, "w", embed);
  compact(g);
  return g;
}

AlgebraMaps algebra_maps(const FunctorBody& a) {
  Formula mu_inf = a.mu();
  Formula a_mu = a.apply(mu_inf);
  AlgebraMaps out;
  {
    // into = mu_r over id
    ProofGraph g;
    NodeId id = add_id(g, {}, "y", a_mu);
    RuleInstance r;
    r.kind = RuleKind::MuR;
    r.outer = kInf;
    r.inner = kInf;
    g.root = add_rule(g, Sequent{{}, {{"y", a_mu}}, mu_inf}, std::move(r), {id});
    out.into = std::move(g);
  }
  {
    // out = mu_l then the lifted one-step unfolding
    ProofGraph g;
    ConstraintForest oa = ConstraintForest::trivial().extend(kInf, "a");
    Formula mu_a = Formula::mu(OrdinalTerm::var("a"), a.body);
    auto embed = [&](const std::string& ctx) -> NodeId {
      // ctx : mu^a X.A |- mu X.A
      ConstraintForest ob = oa.extend(OrdinalTerm::var("a"), "b");
      Formula mu_b = Formula::mu(OrdinalTerm::var("b"), a.body);
      NodeId idn = add_id(g, ob, "z", a.apply(mu_b));
      RuleInstance mur;
      mur.kind = RuleKind::MuR;
      mur.outer = kInf;
      mur.inner = OrdinalTerm::var("b");
      NodeId m1 = add_rule(g, Sequent{ob, {{"z", a.apply(mu_b)}}, mu_inf}, std::move(mur), {idn});
      RuleInstance mul;
      mul.kind = RuleKind::MuL;
      mul.outer = OrdinalTerm::var("a");
      mul.eigen = "b";
      mul.principal = ctx;
      mul.bound = {"z"};
      return add_rule(g, Sequent{oa, {{ctx, mu_a}}, mu_inf}, std::move(mul), {m1});
    };
    NodeId lifted = lift_rec(g, a.body, mu_a, mu_inf, oa, "w", embed);
    RuleInstance mul;
    mul.kind = RuleKind::MuL;
    mul.outer = kInf;
    mul.eigen = "a";
    mul.principal = "x";
    mul.bound = {"w"};
    g.root = add_rule(g, Sequent{{}, {{"x", mu_inf}}, a_mu}, std::move(mul), {lifted});
    compact(g);
    out.out = std::move(g);
  }
  return out;
}

CoalgebraMaps coalgebra_maps(const FunctorBody& a) {
  Formula nu_inf = a.nu();
  Formula a_nu = a.apply(nu_inf);
  CoalgebraMaps out;
  {
    // out = nu_l over id
    ProofGraph g;
    NodeId id = add_id(g, {}, "z", a_nu);
    RuleInstance r;
    r.kind = RuleKind::NuL;
    r.outer = kInf;
    r.inner = kInf;
    r.principal = "x";
    r.bound = {"z"};
    g.root = add_rule(g, Sequent{{}, {{"x", nu_inf}}, a_nu}, std::move(r), {id});
    out.out = std::move(g);
  }
  {
    // into = nu_r then the lifted one-step unfolding
    ProofGraph g;
    ConstraintForest oa = ConstraintForest::trivial().extend(kInf, "a");
    Formula nu_a = Formula::nu(OrdinalTerm::var("a"), a.body);
    auto embed = [&](const std::string& ctx) -> NodeId {
      // ctx : nu X.A |- nu^a X.A
      ConstraintForest ob = oa.extend(OrdinalTerm::var("a"), "b");
      Formula nu_b = Formula::nu(OrdinalTerm::var("b"), a.body);
      NodeId idn = add_id(g, ob, "z", a.apply(nu_b));
      RuleInstance nul;
      nul.kind = RuleKind::NuL;
      nul.outer = kInf;
      nul.inner = OrdinalTerm::var("b");
      nul.principal = ctx;
      nul.bound = {"z"};
      NodeId m1 = add_rule(g, Sequent{ob, {{ctx, nu_inf}}, a.apply(nu_b)}, std::move(nul), {idn});
      RuleInstance nur;
      nur.kind = RuleKind::NuR;
      nur.outer = OrdinalTerm::var("a");
      nur.eigen = "b";
      return add_rule(g, Sequent{oa, {{ctx, nu_inf}}, nu_a}, std::move(nur), {m1});
    };
    NodeId lifted = lift_rec(g, a.body, nu_inf, nu_a, oa, "w", embed);
    RuleInstance nur;
    nur.kind = RuleKind::NuR;
    nur.outer = kInf;
    nur.eigen = "a";
    g.root = add_rule(g, Sequent{{}, {{"w", a_nu}}, nu_inf}, std::move(nur), {lifted});
    compact(g);
    out.into = std::move(g);
  }
  return out;
}

ProofGraph fold(const FunctorBody& a, const ProofGraph& u) {
  const Sequent& us = u.root_sequent();
  if (us.context.size() != 1 || !us.constraint.is_trivial())
    throw Error(ErrorCode::ArityMismatch, "fold expects an algebra A[B/X] |- B");
  Formula b = us.conclusion;
  if (!(us.context[0].second == a.apply(b)))
    throw Error(ErrorCode::ShapeMismatch, "algebra hypothesis is not A[B/X]");

  ProofGraph g;
  std::string av = "a", bv = "b";
  {
    std::set<std::string> used = u.ordinal_names();
    int i = 0;
    while (used.count(av)) av = "a" + std::to_string(++i);
    while (used.count(bv) || bv == av) bv = "b" + std::to_string(++i);
  }
  ConstraintForest oa = ConstraintForest::trivial().extend(kInf, av);
  ConstraintForest ob = oa.extend(OrdinalTerm::var(av), bv);
  Formula mu_inf = a.mu();
  Formula mu_a = Formula::mu(OrdinalTerm::var(av), a.body);
  Formula mu_b = Formula::mu(OrdinalTerm::var(bv), a.body);

  // companion: a < inf ; x1 : A[mu^a/X] |- B, filled in below
  NodeId comp = g.add(Node{Sequent{oa, {{"x1", a.apply(mu_a)}}, b}, RuleStep{}});

  auto embed = [&](const std::string& ctx) -> NodeId {
    // w : a < inf ; ctx : mu^a X.A |- B  by mu_l(a, b) into the back edge
    BackEdge be;
    be.companion = comp;
    be.ord_renaming[OrdinalTerm::var(av)] = OrdinalTerm::var(bv);
    be.var_renaming["x1"] = "x1b";
    NodeId leaf = g.add(Node{Sequent{ob, {{"x1b", a.apply(mu_b)}}, b}, std::move(be)});
    RuleInstance mul;
    mul.kind = RuleKind::MuL;
    mul.outer = OrdinalTerm::var(av);
    mul.eigen = bv;
    mul.principal = ctx;
    mul.bound = {"x1b"};
    return add_rule(g, Sequent{oa, {{ctx, mu_a}}, b}, std::move(mul), {leaf});
  };
  NodeId lifted = lift_rec(g, a.body, mu_a, b, oa, "x1", embed);

  ProofGraph u_wide = widen_with(rename_context_var(u, us.context[0].first, "q"), av);
  NodeId u_node = graft(g, u_wide);

  RuleInstance cut;
  cut.kind = RuleKind::Cut;
  cut.bound = {"q"};
  g.at(comp).step = RuleStep{std::move(cut), {lifted, u_node}};

  RuleInstance mul;
  mul.kind = RuleKind::MuL;
  mul.outer = kInf;
  mul.eigen = av;
  mul.principal = "x";
  mul.bound = {"x1"};
  g.root = add_rule(g, Sequent{{}, {{"x", mu_inf}}, b}, std::move(mul), {comp});
  compact(g);
  return g;
}

ProofGraph unfold_coalg(const FunctorBody& a, const ProofGraph& u) {
  const Sequent& us = u.root_sequent();
  if (us.context.size() != 1 || !us.constraint.is_trivial())
    throw Error(ErrorCode::ArityMismatch, "unfold expects a coalgebra B |- A[B/X]");
  Formula b = us.context[0].second;
  if (!(us.conclusion == a.apply(b)))
    throw Error(ErrorCode::ShapeMismatch, "coalgebra conclusion is not A[B/X]");

  ProofGraph g;
  std::string av = "a", bv = "b";
  {
    std::set<std::string> used = u.ordinal_names();
    int i = 0;
    while (used.count(av)) av = "a" + std::to_string(++i);
    while (used.count(bv) || bv == av) bv = "b" + std::to_string(++i);
  }
  ConstraintForest oa = ConstraintForest::trivial().extend(kInf, av);
  ConstraintForest ob = oa.extend(OrdinalTerm::var(av), bv);
  Formula nu_inf = a.nu();
  Formula nu_a = Formula::nu(OrdinalTerm::var(av), a.body);
  Formula nu_b = Formula::nu(OrdinalTerm::var(bv), a.body);

  // companion: a < inf ; x : B |- A[nu^a/X], filled in below
  NodeId comp = g.add(Node{Sequent{oa, {{"x", b}}, a.apply(nu_a)}, RuleStep{}});

  auto embed = [&](const std::string& ctx) -> NodeId {
    // w : a < inf ; ctx : B |- nu^a X.A  by nu_r(a, b) into the back edge
    BackEdge be;
    be.companion = comp;
    be.ord_renaming[OrdinalTerm::var(av)] = OrdinalTerm::var(bv);
    be.var_renaming["x"] = ctx;
    NodeId leaf = g.add(Node{Sequent{ob, {{ctx, b}}, a.apply(nu_b)}, std::move(be)});
    RuleInstance nur;
    nur.kind = RuleKind::NuR;
    nur.outer = OrdinalTerm::var(av);
    nur.eigen = bv;
    return add_rule(g, Sequent{oa, {{ctx, b}}, nu_a}, std::move(nur), {leaf});
  };
  NodeId lifted = lift_rec(g, a.body, b, nu_a, oa, "q", embed);

  ProofGraph u_wide = widen_with(rename_context_var(u, us.context[0].first, "x"), av);
  NodeId u_node = graft(g, u_wide);

  RuleInstance cut;
  cut.kind = RuleKind::Cut;
  cut.bound = {"q"};
  g.at(comp).step = RuleStep{std::move(cut), {u_node, lifted}};

  RuleInstance nur;
  nur.kind = RuleKind::NuR;
  nur.outer = kInf;
  nur.eigen = av;
  g.root = add_rule(g, Sequent{{}, {{"x", b}}, nu_inf}, std::move(nur), {comp});
  compact(g);
  return g;
}

ProofGraph compose_arrows(const ProofGraph& u, const ProofGraph& v) {
  const Sequent& usq = u.root_sequent();
  const Sequent& vsq = v.root_sequent();
  if (vsq.context.size() != 1 || !(usq.conclusion == vsq.context[0].second))
    throw Error(ErrorCode::ShapeMismatch, "arrows do not compose");
  ProofGraph g;
  NodeId un = graft(g, u);
  NodeId vn = graft(g, v);
  RuleInstance cut;
  cut.kind = RuleKind::Cut;
  cut.bound = {vsq.context[0].first};
  Sequent seq;
  seq.constraint = usq.constraint;
  seq.context = usq.context;
  seq.conclusion = vsq.conclusion;
  g.root = add_rule(g, std::move(seq), std::move(cut), {un, vn});
  return g;
}

bool uniqueness_probe(const FunctorBody& a, const ProofGraph& u, const ProofGraph& candidate,
                      const std::vector<ProofGraph>& samples, unsigned depth, std::uint64_t fuel) {
  Formula b = u.root_sequent().conclusion;
  Formula a_mu = a.apply(a.mu());
  ProofGraph folded = fold(a, u);

  // law pre-check: candidate . into == u . A(candidate) on A[mu]-probes
  AlgebraMaps maps = algebra_maps(a);
  ProofGraph lhs = compose_arrows(maps.into, candidate);
  ProofGraph rhs = compose_arrows(lift_functor(a, candidate), u);
  std::vector<ProofGraph> probes;
  if (classify(a_mu).is_finitary) {
    for (const Value& w : enumerate_values(a_mu, depth + 2, 16))
      probes.push_back(encode_value(w, a_mu));
  } else {
    for (const ProofGraph& s : samples) probes.push_back(compose_arrows(s, maps.out));
  }
  for (const ProofGraph& p : probes) {
    if (!obs_equiv(apply_args(lhs, {p}), apply_args(rhs, {p}), b, depth, fuel)) return false;
  }
  for (const ProofGraph& s : samples) {
    if (!obs_equiv(apply_args(candidate, {s}), apply_args(folded, {s}), b, depth, fuel))
      return false;
  }
  return true;
}

}  // namespace fixproof
