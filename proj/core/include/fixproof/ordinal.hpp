#ifndef FIXPROOF_ORDINAL_HPP
#define FIXPROOF_ORDINAL_HPP

#include <compare>
#include <string>

namespace fixproof {

/// An ordinal term: either the constant infinity or a named variable.
class OrdinalTerm {
 public:
  OrdinalTerm() : name_() {}  // infinity

  static OrdinalTerm infinity() { return OrdinalTerm(); }
  static OrdinalTerm var(std::string name) {
    OrdinalTerm t;
    t.name_ = std::move(name);
    return t;
  }

  bool is_infinity() const { return name_.empty(); }
  bool is_var() const { return !name_.empty(); }
  const std::string& name() const { return name_; }

  std::string to_string() const { return is_infinity() ? "inf" : name_; }

  friend bool operator==(const OrdinalTerm&, const OrdinalTerm&) = default;
  friend auto operator<=>(const OrdinalTerm&, const OrdinalTerm&) = default;

 private:
  std::string name_;  // empty means infinity; "inf" is reserved in the grammar
};

}  // namespace fixproof

#endif
