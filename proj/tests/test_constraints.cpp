#include "doctest.h"

#include "fixproof/constraints.hpp"

using namespace fixproof;

namespace {
const OrdinalTerm inf = OrdinalTerm::infinity();
OrdinalTerm v(const std::string& n) { return OrdinalTerm::var(n); }
}  // namespace

TEST_CASE("entails") {
  ConstraintForest o = ConstraintForest::trivial();
  CHECK(o.entails(inf, inf));  // inf < inf holds in any constraint

  ConstraintForest chain = o.extend(inf, "a").extend(v("a"), "b");
  CHECK(chain.entails(v("b"), v("a")));
  CHECK(chain.entails(v("b"), inf));
  CHECK(chain.entails(v("a"), inf));
  CHECK_FALSE(chain.entails(v("a"), v("b")));
  CHECK_FALSE(chain.entails(v("a"), v("a")));
  CHECK_FALSE(chain.entails(inf, v("a")));

  ConstraintForest siblings = o.extend(inf, "a").extend(inf, "b");
  CHECK_FALSE(siblings.entails(v("a"), v("b")));
  CHECK_FALSE(siblings.entails(v("b"), v("a")));

  CHECK_THROWS_AS(o.entails(v("zz"), inf), Error);
}

TEST_CASE("extend") {
  ConstraintForest o = ConstraintForest::trivial();
  ConstraintForest oa = o.extend(inf, "a");
  CHECK(oa.contains_var("a"));
  CHECK(o.is_trivial());  // persistence: o unchanged

  ConstraintForest ob = oa.extend(v("a"), "b");
  CHECK(ob.entails(v("b"), v("a")));

  CHECK_THROWS_AS(oa.extend(inf, "a"), Error);       // name clash
  CHECK_THROWS_AS(o.extend(v("a"), "c"), Error);     // unknown anchor
}

TEST_CASE("contraction") {
  ConstraintForest chain = ConstraintForest::trivial().extend(inf, "a").extend(v("a"), "b");
  ConstraintForest c = chain.contract_root_child("a");
  CHECK_FALSE(c.contains_var("a"));
  CHECK(c.is_root_child("b"));

  CHECK_THROWS_AS(chain.contract_root_child("b"), Error);  // not a child of the root
  CHECK_THROWS_AS(ConstraintForest::trivial().contract_root_child("a"), Error);
}

TEST_CASE("contraction preserves other inequalities") {
  // inf -> a -> b -> c, plus inf -> d
  ConstraintForest o = ConstraintForest::trivial()
                           .extend(inf, "a")
                           .extend(v("a"), "b")
                           .extend(v("b"), "c")
                           .extend(inf, "d");
  ConstraintForest c = o.contract_root_child("a");
  CHECK(c.entails(v("c"), v("b")));
  CHECK(c.is_root_child("b"));
  CHECK(c.is_root_child("d"));
  for (const auto& x : c.variables())
    for (const auto& y : c.variables())
      if (o.entails(v(x), v(y))) CHECK(c.entails(v(x), v(y)));
}

TEST_CASE("monotonicity of entails under extension") {
  ConstraintForest o = ConstraintForest::trivial().extend(inf, "a").extend(v("a"), "b");
  ConstraintForest o2 = o.extend(v("b"), "c").extend(inf, "d");
  for (const auto& x : o.variables())
    for (const auto& y : o.variables())
      if (o.entails(v(x), v(y))) CHECK(o2.entails(v(x), v(y)));
}

TEST_CASE("textual round trip") {
  ConstraintForest o = ConstraintForest::trivial()
                           .extend(inf, "a")
                           .extend(v("a"), "b")
                           .extend(inf, "c");
  ConstraintForest back = ConstraintForest::parse(o.to_string());
  CHECK(back == o);

  CHECK(ConstraintForest::parse("") == ConstraintForest::trivial());
  CHECK(ConstraintForest::parse("b < a < inf, c < inf") == o);
  CHECK_THROWS_AS(ConstraintForest::parse("a < b"), Error);
  CHECK_THROWS_AS(ConstraintForest::parse("inf < a < inf"), Error);
}
