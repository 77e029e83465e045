#ifndef FIXPROOF_FORMULA_HPP
#define FIXPROOF_FORMULA_HPP

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "fixproof/error.hpp"
#include "fixproof/ordinal.hpp"

namespace fixproof {

enum class Conn { Top, Or, And, Imp, Mu, Nu, Fix };

/// Immutable formula tree over the single fixpoint variable X.
/// Binders carry ordinal annotations; nested binders shadow.
class Formula {
 public:
  Formula() : Formula(top()) {}

  static Formula top();
  static Formula fixvar();
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula mu(OrdinalTerm ann, Formula body);
  static Formula nu(OrdinalTerm ann, Formula body);

  Conn kind() const { return rep_->kind; }
  bool is_binder() const { return kind() == Conn::Mu || kind() == Conn::Nu; }
  Formula left() const;   // Or/And/Imp
  Formula right() const;  // Or/And/Imp
  Formula body() const;   // Mu/Nu
  const OrdinalTerm& annotation() const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  /// True when X occurs outside the scope of any binder.
  bool has_free_fixvar() const;

  /// Replace free X occurrences by `f`.
  Formula subst_fixvar(const Formula& f) const;

  /// Same binder with a different annotation; requires a binder.
  Formula reannotate(const OrdinalTerm& ann) const;

  /// Apply a renaming to every ordinal annotation (free and bound alike:
  /// ordinal variables are never bound by formulas).
  Formula map_ordinals(const std::function<OrdinalTerm(const OrdinalTerm&)>& f) const;

  /// Ordinal variables occurring in annotations.
  void collect_ordinal_vars(std::set<std::string>& out) const;

  std::string to_string() const;

 private:
  struct Rep {
    Conn kind;
    OrdinalTerm ann;
    std::shared_ptr<const Rep> l, r;
  };
  explicit Formula(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

struct Classification {
  bool is_pure = false;
  bool is_finitary = false;
};

/// body in L+(X): no free X in the antecedent of any implication, and every
/// nested binder body again strictly positive.
bool strictly_positive(const Formula& body);

/// Every binder body in `f` is strictly positive.
bool well_formed(const Formula& f);

Classification classify(const Formula& f);

/// Unfold a Mu/Nu binder, re-annotating the recursive occurrences with
/// `inner`. Throws ShapeError if `f` is not a binder.
Formula unfold_fixpoint(const Formula& f, const OrdinalTerm& inner);

/// Named formula abbreviations for the surface syntax.
using AbbrevEnv = std::map<std::string, Formula>;

/// Parse the surface grammar. Enforces strict positivity (PositivityError)
/// and rejects free X at the top level of a sentence (ScopeError) when
/// `require_sentence` is set.
Formula parse_formula(const std::string& text, const AbbrevEnv* env = nullptr,
                      bool require_sentence = true);

std::string print_formula(const Formula& f);

}  // namespace fixproof

#endif
