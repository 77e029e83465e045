#include "doctest.h"

#include <random>

#include "fixproof/formula.hpp"

using namespace fixproof;

namespace {
const OrdinalTerm inf = OrdinalTerm::infinity();

Formula nat() { return parse_formula("mu[inf]X. T \\/ X"); }
}  // namespace

TEST_CASE("parse the running examples") {
  Formula n = parse_formula("mu[inf]X. T \\/ X");
  CHECK(n.kind() == Conn::Mu);
  CHECK(n.annotation() == inf);
  CHECK(n.body().kind() == Conn::Or);
  CHECK(n.body().left().kind() == Conn::Top);
  CHECK(n.body().right().kind() == Conn::Fix);

  CHECK(parse_formula("T").kind() == Conn::Top);

  Formula s = parse_formula("nu[inf]X. (mu[inf]X. T \\/ X) /\\ X");
  CHECK(s.kind() == Conn::Nu);
  CHECK(s.body().left() == n);
}

TEST_CASE("positivity violations are rejected") {
  CHECK_THROWS_WITH_AS(parse_formula("mu[inf]X. X -> T"), doctest::Contains("PositivityError"),
                       Error);
  CHECK_THROWS_AS(parse_formula("nu[a]X. (X -> T) \\/ X"), Error);
  // X under a nested binder's antecedent is fine when rebound
  CHECK_NOTHROW(parse_formula("mu[inf]X. T \\/ ((mu[inf]X. T \\/ X) -> X)"));
}

TEST_CASE("free X outside a binder is a scope error") {
  CHECK_THROWS_AS(parse_formula("X"), Error);
  CHECK_THROWS_AS(parse_formula("T \\/ X"), Error);
  CHECK_NOTHROW(parse_formula("T \\/ X", nullptr, false));
}

TEST_CASE("strictly_positive on spec examples") {
  CHECK(strictly_positive(Formula::disj(Formula::top(), Formula::fixvar())));
  CHECK_FALSE(strictly_positive(Formula::imp(Formula::fixvar(), Formula::top())));
  // wellfounded omega-branching trees: N -> X is fine on the right
  CHECK(strictly_positive(Formula::imp(nat(), Formula::fixvar())));
}

TEST_CASE("classification") {
  Formula n = nat();
  CHECK(classify(n).is_pure);
  CHECK(classify(n).is_finitary);

  Formula s = Formula::nu(inf, Formula::conj(n, Formula::fixvar()));
  CHECK(classify(s).is_pure);
  CHECK_FALSE(classify(s).is_finitary);

  Formula fn = Formula::imp(n, n);
  CHECK(classify(fn).is_pure);
  CHECK_FALSE(classify(fn).is_finitary);

  Formula annotated = Formula::mu(OrdinalTerm::var("a"), Formula::disj(Formula::top(), Formula::fixvar()));
  CHECK_FALSE(classify(annotated).is_pure);
  CHECK(classify(annotated).is_finitary);
}

TEST_CASE("unfold_fixpoint") {
  Formula n = nat();
  Formula un = unfold_fixpoint(n, inf);
  CHECK(un == Formula::disj(Formula::top(), n));

  Formula s = Formula::nu(inf, Formula::conj(nat(), Formula::fixvar()));
  Formula sa = unfold_fixpoint(s, OrdinalTerm::var("a"));
  CHECK(sa == Formula::conj(nat(), s.reannotate(OrdinalTerm::var("a"))));

  Formula degenerate = Formula::mu(OrdinalTerm::var("a"), Formula::fixvar());
  CHECK(unfold_fixpoint(degenerate, OrdinalTerm::var("b")) ==
        degenerate.reannotate(OrdinalTerm::var("b")));

  CHECK_THROWS_AS(unfold_fixpoint(Formula::top(), inf), Error);
}

namespace {

Formula random_formula(std::mt19937& rng, int depth, bool allow_fix) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 6);
  switch (pick(rng)) {
    case 0:
      return Formula::top();
    case 1:
      return allow_fix ? Formula::fixvar() : Formula::top();
    case 2:
      return Formula::disj(random_formula(rng, depth - 1, allow_fix),
                           random_formula(rng, depth - 1, allow_fix));
    case 3:
      return Formula::conj(random_formula(rng, depth - 1, allow_fix),
                           random_formula(rng, depth - 1, allow_fix));
    case 4:
      return Formula::imp(random_formula(rng, depth - 1, false),
                          random_formula(rng, depth - 1, allow_fix));
    case 5: {
      std::uniform_int_distribution<int> ann(0, 2);
      int a = ann(rng);
      OrdinalTerm t = a == 0 ? OrdinalTerm::infinity() : OrdinalTerm::var(a == 1 ? "a" : "b");
      return Formula::mu(t, random_formula(rng, depth - 1, true));
    }
    default: {
      std::uniform_int_distribution<int> ann(0, 1);
      OrdinalTerm t = ann(rng) ? OrdinalTerm::infinity() : OrdinalTerm::var("c");
      return Formula::nu(t, random_formula(rng, depth - 1, true));
    }
  }
}

}  // namespace

TEST_CASE("print/parse round trip on random formulas") {
  std::mt19937 rng(7);
  int done = 0;
  for (int i = 0; i < 500; ++i) {
    Formula f = random_formula(rng, 4, false);
    if (!well_formed(f)) continue;
    ++done;
    std::string text = print_formula(f);
    // annotated variables need an environment-free parse without the
    // sentence restriction; annotations are unconstrained at this level
    Formula g = parse_formula(text, nullptr, false);
    CHECK_MESSAGE(f == g, text);
  }
  CHECK(done > 100);
}

TEST_CASE("strict positivity is stable under unfolding") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    Formula body = random_formula(rng, 3, true);
    if (!strictly_positive(body)) continue;
    Formula f = Formula::mu(inf, body);
    Formula un = unfold_fixpoint(f, OrdinalTerm::var("d"));
    CHECK(well_formed(un));
  }
}
