#ifndef FIXPROOF_ALGEBRA_HPP
#define FIXPROOF_ALGEBRA_HPP

#include "fixproof/eval.hpp"

namespace fixproof {

/// A strictly positive, purely annotated formula body over X, viewed as an
/// endofunctor on types.
struct FunctorBody {
  Formula body;

  explicit FunctorBody(Formula b) : body(std::move(b)) {
    if (!strictly_positive(body))
      throw Error(ErrorCode::PositivityError, "functor body must be strictly positive");
    if (!classify(body).is_pure)
      throw Error(ErrorCode::ShapeMismatch, "functor body must carry pure annotations");
  }

  Formula apply(const Formula& arg) const { return body.subst_fixvar(arg); }
  Formula mu() const { return Formula::mu(OrdinalTerm::infinity(), body); }
  Formula nu() const { return Formula::nu(OrdinalTerm::infinity(), body); }
};

/// Functorial action on proofs: from u : B |- C build A(u) : A[B/X] |- A[C/X].
/// The ambient constraint of u is carried through.
ProofGraph lift_functor(const FunctorBody& a, const ProofGraph& u);

struct AlgebraMaps {
  ProofGraph into;  // A[mu X.A/X] |- mu X.A
  ProofGraph out;   // mu X.A |- A[mu X.A/X]
};

/// The initial-algebra isomorphism for mu X. A.
AlgebraMaps algebra_maps(const FunctorBody& a);

struct CoalgebraMaps {
  ProofGraph out;   // nu X.A |- A[nu X.A/X]
  ProofGraph into;  // A[nu X.A/X] |- nu X.A
};

/// The final-coalgebra isomorphism for nu X. A.
CoalgebraMaps coalgebra_maps(const FunctorBody& a);

/// Catamorphism: from u : A[B/X] |- B build the one-cycle proof
/// fold(u) : mu X.A |- B.
ProofGraph fold(const FunctorBody& a, const ProofGraph& u);

/// Anamorphism: from u : B |- A[B/X] build unfold(u) : B |- nu X.A.
ProofGraph unfold_coalg(const FunctorBody& a, const ProofGraph& u);

/// Composition of arrows u : A |- B and v : B |- C as one cut.
ProofGraph compose_arrows(const ProofGraph& u, const ProofGraph& v);

/// True when `candidate` satisfies the algebra-morphism law on the probes and
/// is observationally equivalent to fold(a, u) on `samples` (closed proofs of
/// mu X.A) at the given depth.
bool uniqueness_probe(const FunctorBody& a, const ProofGraph& u, const ProofGraph& candidate,
                      const std::vector<ProofGraph>& samples, unsigned depth, std::uint64_t fuel);

}  // namespace fixproof

#endif
