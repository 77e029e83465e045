#ifndef FIXPROOF_CONSTRAINTS_HPP
#define FIXPROOF_CONSTRAINTS_HPP

#include <map>
#include <string>
#include <vector>

#include "fixproof/error.hpp"
#include "fixproof/ordinal.hpp"

namespace fixproof {

/// An ordinal constraint: a finite rooted tree whose root is infinity and
/// whose other vertices are injectively labelled ordinal variables.
/// entails(a, b) holds when b is infinity, or a sits strictly below b.
///
/// The structure is a value; extend/contract return modified copies.
class ConstraintForest {
 public:
  ConstraintForest() = default;

  static ConstraintForest trivial() { return {}; }

  bool is_trivial() const { return parent_.empty(); }
  bool contains(const OrdinalTerm& t) const {
    return t.is_infinity() || parent_.count(t.name()) > 0;
  }
  bool contains_var(const std::string& v) const { return parent_.count(v) > 0; }

  /// Variables in a deterministic (sorted) order.
  std::vector<std::string> variables() const;

  /// Parent of a variable; throws UnknownTerm.
  OrdinalTerm parent_of(const std::string& v) const;

  bool is_root_child(const std::string& v) const;

  /// O |- a < b. Throws UnknownTerm when a or b does not occur.
  bool entails(const OrdinalTerm& a, const OrdinalTerm& b) const;

  /// O +_at fresh: add `fresh` as a new child of the vertex labelled `at`.
  ConstraintForest extend(const OrdinalTerm& at, const std::string& fresh) const;

  /// O[inf/a]: remove root child `a`, re-parenting its children to the root.
  ConstraintForest contract_root_child(const std::string& a) const;

  /// Chains like "b < a < inf, c < inf".
  std::string to_string() const;
  static ConstraintForest parse(const std::string& text);

  friend bool operator==(const ConstraintForest&, const ConstraintForest&) = default;

 private:
  std::map<std::string, OrdinalTerm> parent_;
};

}  // namespace fixproof

#endif
