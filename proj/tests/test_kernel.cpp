#include "doctest.h"

#include <functional>

#include "fixproof/validity.hpp"
#include "helpers.hpp"

using namespace fixproof;

namespace {

const OrdinalTerm inf = OrdinalTerm::infinity();
OrdinalTerm v(const std::string& n) { return OrdinalTerm::var(n); }

Formula unit_stream_type() { return parse_formula("nu[inf]X. T /\\ X"); }

}  // namespace

TEST_CASE("nu_r step of the unit stream example") {
  Formula u = unit_stream_type();
  Sequent con{ConstraintForest::trivial(), {}, u};
  RuleInstance r;
  r.kind = RuleKind::NuR;
  r.outer = inf;
  r.eigen = "a";
  Sequent prem{ConstraintForest::trivial().extend(inf, "a"), {}, unfold_fixpoint(u, v("a"))};
  std::vector<Sequent> prems{prem};
  CHECK_FALSE(check_rule_instance(con, r, prems));

  // mu_r with an unknown inner term
  RuleInstance bad;
  bad.kind = RuleKind::MuR;
  bad.outer = inf;
  bad.inner = v("b");
  Formula n = parse_formula("mu[inf]X. T \\/ X");
  Sequent ncon{ConstraintForest::trivial(), {}, n};
  Sequent nprem{ConstraintForest::trivial(), {}, unfold_fixpoint(n, v("b"))};
  std::vector<Sequent> nprems{nprem};
  auto err = check_rule_instance(ncon, bad, nprems);
  REQUIRE(err);
  CHECK(err->code() == ErrorCode::UnknownTerm);
}

TEST_CASE("id demands an exactly singleton context") {
  Formula t = Formula::top();
  RuleInstance r;
  r.kind = RuleKind::Id;
  r.principal = "x";
  Sequent two{ConstraintForest::trivial(), {{"x", t}, {"y", t}}, t};
  auto err = check_rule_instance(two, r, {});
  REQUIRE(err);
  CHECK(err->code() == ErrorCode::ContextShape);

  Sequent one{ConstraintForest::trivial(), {{"x", t}}, t};
  CHECK_FALSE(check_rule_instance(one, r, {}));
}

TEST_CASE("weakening builds larger contexts") {
  // for any A and context containing A, Id after Weak* is accepted
  Formula n = parse_formula("mu[inf]X. T \\/ X");
  ProofGraph g;
  RuleInstance id;
  id.kind = RuleKind::Id;
  id.principal = "x";
  NodeId leaf = g.add(Node{Sequent{{}, {{"x", n}}, n}, RuleStep{id, {}}});
  RuleInstance w1;
  w1.kind = RuleKind::Weak;
  w1.principal = "y";
  NodeId mid = g.add(Node{Sequent{{}, {{"x", n}, {"y", Formula::top()}}, n}, RuleStep{w1, {leaf}}});
  RuleInstance w2;
  w2.kind = RuleKind::Weak;
  w2.principal = "z";
  g.root = g.add(Node{
      Sequent{{}, {{"z", n}, {"x", n}, {"y", Formula::top()}}, n}, RuleStep{w2, {mid}}});
  CHECK_FALSE(check_graph(g));
}

TEST_CASE("check_graph accepts the corpus") {
  for (const auto& t : testutil::corpus().theorems) {
    auto err = check_graph(t.graph);
    CHECK_MESSAGE(!err, t.name, ": ", err ? err->what() : "");
  }
  for (const auto& t : testutil::negative_corpus().theorems) {
    auto err = check_graph(t.graph);
    CHECK_MESSAGE(!err, t.name, ": ", err ? err->what() : "");
  }
}

TEST_CASE("back edge conditions") {
  // unit stream: companion root, sigma(inf) = a
  const ProofGraph& us = testutil::thm("unit_stream");
  CHECK_FALSE(check_graph(us));

  SUBCASE("renaming must be monotone") {
    ProofGraph g = testutil::thm("bounce");
    for (auto& nd : g.nodes) {
      if (!nd.is_back_edge()) continue;
      // a < inf in the companion, but the images a, b are incomparable the
      // wrong way around in the leaf constraint b < a < inf
      nd.back_edge().ord_renaming[v("a")] = v("a");
      nd.back_edge().ord_renaming[inf] = v("b");
    }
    auto err = check_graph(g);
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::RenamingNotMonotone);
  }

  SUBCASE("companion must be a proper ancestor") {
    ProofGraph g = testutil::thm("unit_stream");
    for (NodeId i = 0; i < g.size(); ++i) {
      if (!g.at(i).is_back_edge()) continue;
      g.at(i).back_edge().companion = i;  // self loop is not an ancestor
    }
    auto err = check_graph(g);
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::CompanionNotAncestor);
  }

  SUBCASE("renamed sequent must match the leaf") {
    ProofGraph g = testutil::thm("unit_stream");
    for (auto& nd : g.nodes) {
      if (!nd.is_back_edge()) continue;
      nd.back_edge().ord_renaming[inf] = inf;  // drop the inf -> a renaming
    }
    auto err = check_graph(g);
    REQUIRE(err);
    CHECK(err->code() == ErrorCode::SequentMismatch);
  }
}

TEST_CASE("free_ordinal_vars") {
  Sequent s1{ConstraintForest::trivial().extend(inf, "a"), {},
             parse_formula("nu[a]X. T /\\ X", nullptr, false)};
  CHECK(free_ordinal_vars(s1) == std::set<std::string>{"a"});

  Sequent s2{ConstraintForest::trivial(), {}, Formula::top()};
  CHECK(free_ordinal_vars(s2).empty());

  // b < a < inf ; S |- N /\ S[b]: a occurs only in the constraint
  AbbrevEnv env = testutil::corpus().abbrevs;
  Sequent s3 = parse_sequent("b < a < inf ; s : S |- N /\\ S[b]", &env);
  CHECK(free_ordinal_vars(s3) == std::set<std::string>{"b"});
}

TEST_CASE("unfold_prefix of the unit stream") {
  const ProofGraph& us = testutil::thm("unit_stream");

  Derivation d0 = unfold_prefix(us, 0);
  CHECK_FALSE(d0.rule);
  CHECK(d0.sequent == us.root_sequent());

  Derivation d4 = unfold_prefix(us, 4);
  CHECK_FALSE(check_derivation(d4));
  // shape: nu_r; and_r; [ax_top | nu_r]; ...
  REQUIRE(d4.rule);
  CHECK(d4.rule->kind == RuleKind::NuR);
  REQUIRE(d4.premises.size() == 1);
  CHECK(d4.premises[0].rule->kind == RuleKind::AndR);
  const Derivation& cont = d4.premises[0].premises[1];
  REQUIRE(cont.rule);
  CHECK(cont.rule->kind == RuleKind::NuR);
  // second unfolding introduces a fresh eigenvariable below the first
  const ConstraintForest& deep = cont.premises[0].sequent.constraint;
  CHECK(deep.variables().size() == 2);

  // constraints grow monotonically along every branch, with injective labels
  std::function<void(const Derivation&, const ConstraintForest&)> walk =
      [&](const Derivation& d, const ConstraintForest& parent) {
        for (const auto& var : parent.variables()) CHECK(d.sequent.constraint.contains_var(var));
        for (const auto& p : d.premises) walk(p, d.sequent.constraint);
      };
  walk(d4, ConstraintForest::trivial());
}

TEST_CASE("unfold_prefix replays the corpus graphs") {
  for (const auto& name : {"bounce", "add", "ana01", "double", "bounce_from0"}) {
    const ProofGraph& g = testutil::thm(name);
    for (unsigned depth : {1u, 3u, 6u}) {
      Derivation d = unfold_prefix(g, depth);
      auto err = check_derivation(d);
      CHECK_MESSAGE(!err, name, " depth ", depth, ": ", err ? err->what() : "");
    }
  }
}
