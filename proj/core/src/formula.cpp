#include "fixproof/formula.hpp"

#include <cctype>
#include <sstream>
#include <vector>

namespace fixproof {

Formula Formula::top() {
  static const Formula f{std::make_shared<Rep>(Rep{Conn::Top, {}, nullptr, nullptr})};
  return f;
}
Formula Formula::fixvar() {
  static const Formula f{std::make_shared<Rep>(Rep{Conn::Fix, {}, nullptr, nullptr})};
  return f;
}
Formula Formula::disj(Formula a, Formula b) {
  return Formula{std::make_shared<Rep>(Rep{Conn::Or, {}, a.rep_, b.rep_})};
}
Formula Formula::conj(Formula a, Formula b) {
  return Formula{std::make_shared<Rep>(Rep{Conn::And, {}, a.rep_, b.rep_})};
}
Formula Formula::imp(Formula a, Formula b) {
  return Formula{std::make_shared<Rep>(Rep{Conn::Imp, {}, a.rep_, b.rep_})};
}
Formula Formula::mu(OrdinalTerm ann, Formula body) {
  return Formula{std::make_shared<Rep>(Rep{Conn::Mu, std::move(ann), body.rep_, nullptr})};
}
Formula Formula::nu(OrdinalTerm ann, Formula body) {
  return Formula{std::make_shared<Rep>(Rep{Conn::Nu, std::move(ann), body.rep_, nullptr})};
}

Formula Formula::left() const { return Formula{rep_->l}; }
Formula Formula::right() const { return Formula{rep_->r}; }
Formula Formula::body() const { return Formula{rep_->l}; }
const OrdinalTerm& Formula::annotation() const { return rep_->ann; }

bool Formula::operator==(const Formula& o) const {
  if (rep_ == o.rep_) return true;
  if (rep_->kind != o.rep_->kind) return false;
  switch (rep_->kind) {
    case Conn::Top:
    case Conn::Fix:
      return true;
    case Conn::Or:
    case Conn::And:
    case Conn::Imp:
      return Formula{rep_->l} == Formula{o.rep_->l} && Formula{rep_->r} == Formula{o.rep_->r};
    case Conn::Mu:
    case Conn::Nu:
      return rep_->ann == o.rep_->ann && Formula{rep_->l} == Formula{o.rep_->l};
  }
  return false;
}

bool Formula::has_free_fixvar() const {
  switch (kind()) {
    case Conn::Fix:
      return true;
    case Conn::Top:
      return false;
    case Conn::Or:
    case Conn::And:
    case Conn::Imp:
      return Formula{rep_->l}.has_free_fixvar() || Formula{rep_->r}.has_free_fixvar();
    case Conn::Mu:
    case Conn::Nu:
      return false;  // binder shadows the single variable
  }
  return false;
}

Formula Formula::subst_fixvar(const Formula& f) const {
  switch (kind()) {
    case Conn::Fix:
      return f;
    case Conn::Top:
      return *this;
    case Conn::Or:
      return disj(Formula{rep_->l}.subst_fixvar(f), Formula{rep_->r}.subst_fixvar(f));
    case Conn::And:
      return conj(Formula{rep_->l}.subst_fixvar(f), Formula{rep_->r}.subst_fixvar(f));
    case Conn::Imp:
      return imp(Formula{rep_->l}.subst_fixvar(f), Formula{rep_->r}.subst_fixvar(f));
    case Conn::Mu:
    case Conn::Nu:
      return *this;  // shadowed
  }
  return *this;
}

Formula Formula::reannotate(const OrdinalTerm& ann) const {
  if (kind() == Conn::Mu) return mu(ann, Formula{rep_->l});
  if (kind() == Conn::Nu) return nu(ann, Formula{rep_->l});
  throw Error(ErrorCode::ShapeError, "reannotate on a non-binder formula");
}

Formula Formula::map_ordinals(const std::function<OrdinalTerm(const OrdinalTerm&)>& f) const {
  switch (kind()) {
    case Conn::Top:
    case Conn::Fix:
      return *this;
    case Conn::Or:
      return disj(Formula{rep_->l}.map_ordinals(f), Formula{rep_->r}.map_ordinals(f));
    case Conn::And:
      return conj(Formula{rep_->l}.map_ordinals(f), Formula{rep_->r}.map_ordinals(f));
    case Conn::Imp:
      return imp(Formula{rep_->l}.map_ordinals(f), Formula{rep_->r}.map_ordinals(f));
    case Conn::Mu:
      return mu(f(rep_->ann), Formula{rep_->l}.map_ordinals(f));
    case Conn::Nu:
      return nu(f(rep_->ann), Formula{rep_->l}.map_ordinals(f));
  }
  return *this;
}

void Formula::collect_ordinal_vars(std::set<std::string>& out) const {
  switch (kind()) {
    case Conn::Top:
    case Conn::Fix:
      return;
    case Conn::Or:
    case Conn::And:
    case Conn::Imp:
      Formula{rep_->l}.collect_ordinal_vars(out);
      Formula{rep_->r}.collect_ordinal_vars(out);
      return;
    case Conn::Mu:
    case Conn::Nu:
      if (rep_->ann.is_var()) out.insert(rep_->ann.name());
      Formula{rep_->l}.collect_ordinal_vars(out);
      return;
  }
}

std::string Formula::to_string() const { return print_formula(*this); }

bool strictly_positive(const Formula& body) {
  switch (body.kind()) {
    case Conn::Top:
    case Conn::Fix:
      return true;
    case Conn::Or:
    case Conn::And:
      return strictly_positive(body.left()) && strictly_positive(body.right());
    case Conn::Imp:
      return !body.left().has_free_fixvar() && well_formed(body.left()) &&
             strictly_positive(body.right());
    case Conn::Mu:
    case Conn::Nu:
      return well_formed(body);
  }
  return false;
}

bool well_formed(const Formula& f) {
  switch (f.kind()) {
    case Conn::Top:
    case Conn::Fix:
      return true;
    case Conn::Or:
    case Conn::And:
    case Conn::Imp:
      return well_formed(f.left()) && well_formed(f.right());
    case Conn::Mu:
    case Conn::Nu:
      return strictly_positive(f.body());
  }
  return false;
}

namespace {

bool is_pure_rec(const Formula& f) {
  switch (f.kind()) {
    case Conn::Top:
    case Conn::Fix:
      return true;
    case Conn::Or:
    case Conn::And:
    case Conn::Imp:
      return is_pure_rec(f.left()) && is_pure_rec(f.right());
    case Conn::Mu:
    case Conn::Nu:
      return f.annotation().is_infinity() && is_pure_rec(f.body());
  }
  return false;
}

// F_ID / F+(X): top, or, and, mu only.
bool is_finitary_rec(const Formula& f) {
  switch (f.kind()) {
    case Conn::Top:
    case Conn::Fix:
      return true;
    case Conn::Or:
    case Conn::And:
      return is_finitary_rec(f.left()) && is_finitary_rec(f.right());
    case Conn::Imp:
    case Conn::Nu:
      return false;
    case Conn::Mu:
      return is_finitary_rec(f.body());
  }
  return false;
}

}  // namespace

Classification classify(const Formula& f) {
  return Classification{is_pure_rec(f), is_finitary_rec(f)};
}

Formula unfold_fixpoint(const Formula& f, const OrdinalTerm& inner) {
  if (!f.is_binder()) throw Error(ErrorCode::ShapeError, "unfold_fixpoint on a non-binder");
  return f.body().subst_fixvar(f.reannotate(inner));
}

// ---------------------------------------------------------------------------
// Surface syntax.
//   F  := OR ("->" F)?
//   OR := AND ("\/" AND)*
//   AND := ATOM ("/\" ATOM)*
//   ATOM := "T" | "X" | "(" F ")" | ("mu"|"nu") "[" ORD "]" "X" "." F
//         | IDENT ("[" ORD "]")?
// Binder scope extends maximally to the right.

namespace {

struct Lexer {
  std::string text;
  size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool eof() {
    skip();
    return pos >= text.size();
  }
  bool try_sym(const std::string& s) {
    skip();
    if (text.compare(pos, s.size(), s) == 0) {
      pos += s.size();
      return true;
    }
    return false;
  }
  bool peek_sym(const std::string& s) {
    skip();
    return text.compare(pos, s.size(), s) == 0;
  }
  std::string ident() {
    skip();
    size_t b = pos;
    if (pos < text.size() &&
        (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                   text[pos] == '_' || text[pos] == '\''))
        ++pos;
    }
    return text.substr(b, pos - b);
  }
  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos) + " in formula '" + text + "'");
  }
};

struct FormulaParser {
  Lexer lx;
  const AbbrevEnv* env;

  OrdinalTerm ord() {
    std::string id = lx.ident();
    if (id.empty()) lx.fail("expected ordinal term");
    if (id == "inf") return OrdinalTerm::infinity();
    return OrdinalTerm::var(id);
  }

  Formula binder(bool is_mu) {
    if (!lx.try_sym("[")) lx.fail("expected '[' after binder");
    OrdinalTerm a = ord();
    if (!lx.try_sym("]")) lx.fail("expected ']' after annotation");
    std::string v = lx.ident();
    if (v != "X") lx.fail("expected fixpoint variable X");
    if (!lx.try_sym(".")) lx.fail("expected '.' after binder head");
    Formula body = formula();
    if (!strictly_positive(body))
      throw Error(ErrorCode::PositivityError,
                  "binder body violates strict positivity: " + body.to_string());
    return is_mu ? Formula::mu(a, body) : Formula::nu(a, body);
  }

  Formula atom() {
    lx.skip();
    size_t save = lx.pos;
    std::string id = lx.ident();
    if (id == "T") return Formula::top();
    if (id == "X") return Formula::fixvar();
    if (id == "mu") return binder(true);
    if (id == "nu") return binder(false);
    if (!id.empty()) {
      if (id == "inf") lx.fail("'inf' is not a formula");
      if (env == nullptr || env->find(id) == env->end())
        lx.fail("unknown formula abbreviation '" + id + "'");
      Formula f = env->at(id);
      if (lx.try_sym("[")) {
        OrdinalTerm a = ord();
        if (!lx.try_sym("]")) lx.fail("expected ']'");
        if (!f.is_binder()) lx.fail("abbreviation '" + id + "' is not binder-headed");
        f = f.reannotate(a);
      }
      return f;
    }
    lx.pos = save;
    if (lx.try_sym("(")) {
      Formula f = formula();
      if (!lx.try_sym(")")) lx.fail("expected ')'");
      return f;
    }
    lx.fail("expected formula");
  }

  Formula conj() {
    Formula f = atom();
    while (lx.try_sym("/\\")) f = Formula::conj(f, atom());
    return f;
  }

  Formula disj() {
    Formula f = conj();
    while (true) {
      lx.skip();
      // careful: "\/" only, not the tail of "/\"
      if (lx.peek_sym("\\/")) {
        lx.try_sym("\\/");
        f = Formula::disj(f, conj());
      } else {
        break;
      }
    }
    return f;
  }

  Formula formula() {
    Formula f = disj();
    if (lx.try_sym("->")) return Formula::imp(f, formula());
    return f;
  }
};

int precedence(Conn k) {
  switch (k) {
    case Conn::Imp:
      return 1;
    case Conn::Or:
      return 2;
    case Conn::And:
      return 3;
    default:
      return 4;
  }
}

void print_rec(const Formula& f, int parent_prec, bool rightmost, std::ostream& os) {
  switch (f.kind()) {
    case Conn::Top:
      os << "T";
      return;
    case Conn::Fix:
      os << "X";
      return;
    case Conn::Mu:
    case Conn::Nu: {
      // binder scope is maximal: parenthesize unless we are in rightmost position
      bool paren = !rightmost;
      if (paren) os << "(";
      os << (f.kind() == Conn::Mu ? "mu[" : "nu[") << f.annotation().to_string() << "]X. ";
      print_rec(f.body(), 0, true, os);
      if (paren) os << ")";
      return;
    }
    case Conn::Or:
    case Conn::And:
    case Conn::Imp: {
      int p = precedence(f.kind());
      bool paren = p < parent_prec;
      if (paren) os << "(";
      const char* op = f.kind() == Conn::Or ? " \\/ " : f.kind() == Conn::And ? " /\\ " : " -> ";
      bool right_end = paren || rightmost;
      if (f.kind() == Conn::Imp) {
        // right associative
        print_rec(f.left(), p + 1, false, os);
        os << op;
        print_rec(f.right(), p, right_end, os);
      } else {
        // left associative
        print_rec(f.left(), p, false, os);
        os << op;
        print_rec(f.right(), p + 1, right_end, os);
      }
      if (paren) os << ")";
      return;
    }
  }
}

}  // namespace

Formula parse_formula(const std::string& text, const AbbrevEnv* env, bool require_sentence) {
  FormulaParser p{Lexer{text, 0}, env};
  Formula f = p.formula();
  if (!p.lx.eof()) p.lx.fail("trailing input");
  if (require_sentence && f.has_free_fixvar())
    throw Error(ErrorCode::ScopeError, "fixpoint variable X outside any binder: " + text);
  if (!well_formed(f))
    throw Error(ErrorCode::PositivityError, "formula violates strict positivity: " + text);
  return f;
}

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  print_rec(f, 0, true, os);
  return os.str();
}

}  // namespace fixproof
