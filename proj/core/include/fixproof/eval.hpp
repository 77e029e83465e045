#ifndef FIXPROOF_EVAL_HPP
#define FIXPROOF_EVAL_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "fixproof/rewrite.hpp"

namespace fixproof {

/// First-order result of normalizing a closed proof of a finitary sentence.
class Value {
 public:
  enum class Kind { Unit, Inl, Inr, Pair, Fold };

  Value() : Value(unit()) {}

  static Value unit();
  static Value inl(Value v);
  static Value inr(Value v);
  static Value pair(Value a, Value b);
  static Value fold(Value v);

  static Value nat(std::uint64_t n);
  static Value list(const std::vector<Value>& elems);

  Kind kind() const { return rep_->kind; }
  Value first() const;   // Inl/Inr/Fold payload, or Pair first
  Value second() const;  // Pair second

  bool operator==(const Value& o) const;
  bool operator!=(const Value& o) const { return !(*this == o); }

  /// Decimal when the value is nat-shaped at type N; bracketed list at list
  /// types; constructor syntax otherwise.
  std::string to_string(const Formula* type_hint = nullptr) const;

  std::optional<std::uint64_t> as_nat() const;

 private:
  struct Rep {
    Kind kind;
    std::shared_ptr<const Rep> a, b;
  };
  explicit Value(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
};

/// Parse a value literal: naturals, [..] lists, (a, b) pairs, "u"/"unit",
/// inl/inr/fold applications.
Value parse_value(const std::string& text);

/// The canonical cut-free normal closed proof of a finitary sentence.
ProofGraph encode_value(const Value& v, const Formula& type);

/// Inverse of encode_value on normal closed proofs; NotNormal when a cut
/// remains, NonCanonical when a non-constructor rule heads a subproof.
Value value_of(const ProofGraph& u, const Formula& type);

/// Wrap u (of sequent Gamma |- A) in one multicut binding the context.
ProofGraph apply_args(const ProofGraph& u, const std::vector<ProofGraph>& args);

/// Run a proof of N,...,N |- N on numeric inputs. nullopt = out of fuel.
std::optional<std::uint64_t> run_function(const ProofGraph& u,
                                          const std::vector<std::uint64_t>& nats,
                                          std::uint64_t fuel, Strategy strategy = {});

/// Observe element `index` of a closed proof of nu X. C /\ X.
std::optional<Value> observe_stream(const ProofGraph& u, std::uint64_t index, std::uint64_t fuel);

/// Bounded observational equivalence of two closed proofs of the pure
/// sentence `type`: nu-clauses are tested to `depth` observation levels,
/// implication clauses against all argument values of size <= depth (finitary
/// argument types only). Exact for finitary types. Throws OutOfFuel.
bool obs_equiv(const ProofGraph& u, const ProofGraph& v, const Formula& type, unsigned depth,
               std::uint64_t fuel);

/// All values of a finitary type with at most `size` constructors (helper for
/// probe sets; capped at `max_count` results).
std::vector<Value> enumerate_values(const Formula& type, unsigned size, size_t max_count = 256);

}  // namespace fixproof

#endif
