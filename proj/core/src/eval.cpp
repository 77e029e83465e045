#include "fixproof/eval.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace fixproof {

namespace {
const OrdinalTerm kInf = OrdinalTerm::infinity();
}

Value Value::unit() {
  static const Value v{std::make_shared<Rep>(Rep{Kind::Unit, nullptr, nullptr})};
  return v;
}
Value Value::inl(Value a) { return Value{std::make_shared<Rep>(Rep{Kind::Inl, a.rep_, nullptr})}; }
Value Value::inr(Value a) { return Value{std::make_shared<Rep>(Rep{Kind::Inr, a.rep_, nullptr})}; }
Value Value::pair(Value a, Value b) {
  return Value{std::make_shared<Rep>(Rep{Kind::Pair, a.rep_, b.rep_})};
}
Value Value::fold(Value a) { return Value{std::make_shared<Rep>(Rep{Kind::Fold, a.rep_, nullptr})}; }

Value Value::nat(std::uint64_t n) {
  Value v = fold(inl(unit()));
  for (std::uint64_t i = 0; i < n; ++i) v = fold(inr(v));
  return v;
}

Value Value::list(const std::vector<Value>& elems) {
  Value v = fold(inl(unit()));
  for (auto it = elems.rbegin(); it != elems.rend(); ++it) v = fold(inr(pair(*it, v)));
  return v;
}

Value Value::first() const { return Value{rep_->a}; }
Value Value::second() const { return Value{rep_->b}; }

bool Value::operator==(const Value& o) const {
  if (rep_ == o.rep_) return true;
  if (rep_->kind != o.rep_->kind) return false;
  switch (rep_->kind) {
    case Kind::Unit:
      return true;
    case Kind::Pair:
      return first() == o.first() && second() == o.second();
    default:
      return first() == o.first();
  }
}

std::optional<std::uint64_t> Value::as_nat() const {
  std::uint64_t n = 0;
  Value cur = *this;
  for (;;) {
    if (cur.kind() != Kind::Fold) return std::nullopt;
    Value in = cur.first();
    if (in.kind() == Kind::Inl) {
      if (in.first().kind() != Kind::Unit) return std::nullopt;
      return n;
    }
    if (in.kind() != Kind::Inr) return std::nullopt;
    ++n;
    cur = in.first();
  }
}

namespace {

bool is_nat_type(const Formula& f) {
  // mu X. T \/ X
  if (f.kind() != Conn::Mu) return false;
  Formula b = f.body();
  return b.kind() == Conn::Or && b.left().kind() == Conn::Top && b.right().kind() == Conn::Fix;
}

bool is_list_type(const Formula& f) {
  // mu X. T \/ (E /\ X)
  if (f.kind() != Conn::Mu) return false;
  Formula b = f.body();
  return b.kind() == Conn::Or && b.left().kind() == Conn::Top && b.right().kind() == Conn::And &&
         b.right().right().kind() == Conn::Fix;
}

}  // namespace

std::string Value::to_string(const Formula* type_hint) const {
  if (type_hint) {
    if (is_nat_type(*type_hint)) {
      if (auto n = as_nat()) return std::to_string(*n);
    } else if (is_list_type(*type_hint)) {
      Formula elem = type_hint->body().right().left();
      std::ostringstream os;
      os << "[";
      Value cur = *this;
      bool ok = true, first_e = true;
      while (ok) {
        if (cur.kind() != Kind::Fold) { ok = false; break; }
        Value in = cur.first();
        if (in.kind() == Kind::Inl) break;
        if (in.kind() != Kind::Inr || in.first().kind() != Kind::Pair) { ok = false; break; }
        if (!first_e) os << ", ";
        first_e = false;
        os << in.first().first().to_string(&elem);
        cur = in.first().second();
      }
      if (ok) {
        os << "]";
        return os.str();
      }
    }
  }
  switch (kind()) {
    case Kind::Unit:
      return "unit";
    case Kind::Inl:
      return "inl(" + first().to_string() + ")";
    case Kind::Inr:
      return "inr(" + first().to_string() + ")";
    case Kind::Pair:
      return "(" + first().to_string() + ", " + second().to_string() + ")";
    case Kind::Fold:
      return "fold(" + first().to_string() + ")";
  }
  return "?";
}

Value parse_value(const std::string& text) {
  size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&]() -> Value {
    throw Error(ErrorCode::ParseError, "bad value literal: " + text);
  };
  std::function<Value()> val = [&]() -> Value {
    skip();
    if (pos >= text.size()) return fail();
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::uint64_t n = 0;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
        n = n * 10 + (text[pos++] - '0');
      return Value::nat(n);
    }
    if (c == '[') {
      ++pos;
      std::vector<Value> elems;
      skip();
      if (pos < text.size() && text[pos] == ']') {
        ++pos;
        return Value::list(elems);
      }
      for (;;) {
        elems.push_back(val());
        skip();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ']') {
          ++pos;
          return Value::list(elems);
        }
        return fail();
      }
    }
    if (c == '(') {
      ++pos;
      Value a = val();
      skip();
      if (pos >= text.size() || text[pos] != ',') return fail();
      ++pos;
      Value b = val();
      skip();
      if (pos >= text.size() || text[pos] != ')') return fail();
      ++pos;
      return Value::pair(a, b);
    }
    size_t b = pos;
    while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
    std::string word = text.substr(b, pos - b);
    auto arg = [&]() -> Value {
      skip();
      if (pos >= text.size() || text[pos] != '(') return fail();
      ++pos;
      Value v = val();
      skip();
      if (pos >= text.size() || text[pos] != ')') return fail();
      ++pos;
      return v;
    };
    if (word == "unit" || word == "u") return Value::unit();
    if (word == "inl") return Value::inl(arg());
    if (word == "inr") return Value::inr(arg());
    if (word == "fold") return Value::fold(arg());
    return fail();
  };
  Value v = val();
  skip();
  if (pos != text.size()) throw Error(ErrorCode::ParseError, "trailing input in value: " + text);
  return v;
}

// ---------------------------------------------------------------------------

namespace {

NodeId encode_rec(ProofGraph& g, const Value& v, const Formula& type) {
  Sequent seq;
  seq.conclusion = type;
  switch (v.kind()) {
    case Value::Kind::Unit: {
      if (type.kind() != Conn::Top)
        throw Error(ErrorCode::ShapeMismatch, "unit value at type " + print_formula(type));
      RuleInstance r;
      r.kind = RuleKind::AxTop;
      return g.add(Node{std::move(seq), RuleStep{std::move(r), {}}});
    }
    case Value::Kind::Inl:
    case Value::Kind::Inr: {
      if (type.kind() != Conn::Or)
        throw Error(ErrorCode::ShapeMismatch, "injection at type " + print_formula(type));
      bool left = v.kind() == Value::Kind::Inl;
      NodeId p = encode_rec(g, v.first(), left ? type.left() : type.right());
      RuleInstance r;
      r.kind = RuleKind::OrR;
      r.index = left ? 0 : 1;
      return g.add(Node{std::move(seq), RuleStep{std::move(r), {p}}});
    }
    case Value::Kind::Pair: {
      if (type.kind() != Conn::And)
        throw Error(ErrorCode::ShapeMismatch, "pair at type " + print_formula(type));
      NodeId a = encode_rec(g, v.first(), type.left());
      NodeId b = encode_rec(g, v.second(), type.right());
      RuleInstance r;
      r.kind = RuleKind::AndR;
      return g.add(Node{std::move(seq), RuleStep{std::move(r), {a, b}}});
    }
    case Value::Kind::Fold: {
      if (type.kind() != Conn::Mu)
        throw Error(ErrorCode::ShapeMismatch, "fold at type " + print_formula(type));
      NodeId p = encode_rec(g, v.first(), unfold_fixpoint(type, kInf));
      RuleInstance r;
      r.kind = RuleKind::MuR;
      r.outer = kInf;
      r.inner = kInf;
      return g.add(Node{std::move(seq), RuleStep{std::move(r), {p}}});
    }
  }
  throw Error(ErrorCode::Internal, "unhandled value kind");
}

}  // namespace

ProofGraph encode_value(const Value& v, const Formula& type) {
  if (!classify(type).is_finitary)
    throw Error(ErrorCode::ShapeMismatch, "encode_value needs a finitary type");
  ProofGraph g;
  g.root = encode_rec(g, v, type);
  return g;
}

namespace {

Value value_of_rec(const ProofGraph& g, NodeId n, const Formula& type) {
  const Node& nd = g.at(n);
  if (nd.is_back_edge())
    throw Error(ErrorCode::NonCanonical, n, "back edge in a normal form of finitary type");
  const RuleInstance& r = nd.rule_step().rule;
  switch (r.kind) {
    case RuleKind::AxTop:
      if (type.kind() != Conn::Top) throw Error(ErrorCode::NonCanonical, n, "ax_top at non-T type");
      return Value::unit();
    case RuleKind::OrR: {
      if (type.kind() != Conn::Or) throw Error(ErrorCode::NonCanonical, n, "or_r at non-or type");
      Value in = value_of_rec(g, nd.rule_step().premises[0],
                              r.index == 0 ? type.left() : type.right());
      return r.index == 0 ? Value::inl(in) : Value::inr(in);
    }
    case RuleKind::AndR: {
      if (type.kind() != Conn::And) throw Error(ErrorCode::NonCanonical, n, "and_r at non-and type");
      return Value::pair(value_of_rec(g, nd.rule_step().premises[0], type.left()),
                         value_of_rec(g, nd.rule_step().premises[1], type.right()));
    }
    case RuleKind::MuR: {
      if (type.kind() != Conn::Mu) throw Error(ErrorCode::NonCanonical, n, "mu_r at non-mu type");
      if (!(r.outer == kInf) || !(r.inner == kInf))
        throw Error(ErrorCode::NonCanonical, n, "mu_r with non-inf annotations in a value");
      return Value::fold(value_of_rec(g, nd.rule_step().premises[0], unfold_fixpoint(type, kInf)));
    }
    case RuleKind::Cut:
      throw Error(ErrorCode::NotNormal, n, "residual cut in a normal form");
    default:
      throw Error(ErrorCode::NonCanonical, n,
                  std::string("non-constructor rule ") + rule_kind_name(r.kind));
  }
}

}  // namespace

Value value_of(const ProofGraph& u, const Formula& type) {
  if (!classify(type).is_finitary)
    throw Error(ErrorCode::ShapeMismatch, "value_of needs a finitary type");
  return value_of_rec(u, u.root, type);
}

ProofGraph apply_args(const ProofGraph& u, const std::vector<ProofGraph>& args) {
  const Sequent& rs = u.root_sequent();
  if (args.size() != rs.context.size())
    throw Error(ErrorCode::ArityMismatch, "proof takes " + std::to_string(rs.context.size()) +
                                              " arguments, got " + std::to_string(args.size()));
  if (args.empty()) return u;
  ProofGraph g;
  RuleInstance r;
  r.kind = RuleKind::Cut;
  std::vector<NodeId> premises;
  for (size_t i = 0; i < args.size(); ++i) {
    if (!args[i].root_sequent().closed())
      throw Error(ErrorCode::ArityMismatch, "argument " + std::to_string(i) + " is not closed");
    premises.push_back(graft(g, args[i]));
    r.bound.push_back(rs.context[i].first);
  }
  premises.push_back(graft(g, u));
  Sequent seq;
  seq.constraint = rs.constraint;
  seq.conclusion = rs.conclusion;
  g.root = g.add(Node{std::move(seq), RuleStep{std::move(r), std::move(premises)}});
  return g;
}

std::optional<std::uint64_t> run_function(const ProofGraph& u,
                                          const std::vector<std::uint64_t>& nats,
                                          std::uint64_t fuel, Strategy strategy) {
  Formula n_type = u.root_sequent().conclusion;
  std::vector<ProofGraph> args;
  args.reserve(nats.size());
  for (size_t i = 0; i < nats.size(); ++i)
    args.push_back(encode_value(Value::nat(nats[i]), u.root_sequent().context[i].second));
  ReduceResult res = reduce(apply_args(u, args), fuel, strategy);
  if (!res.normal) return std::nullopt;
  Value v = value_of(res.proof, n_type);
  auto n = v.as_nat();
  if (!n) throw Error(ErrorCode::ShapeMismatch, "result is not a natural number");
  return n;
}

// ---------------------------------------------------------------------------
// Stream observation.

namespace {

struct StreamShape {
  Formula element;  // C in nu X. C /\ X
  Formula stream;   // the nu formula itself
};

StreamShape stream_shape(const Formula& f) {
  if (f.kind() != Conn::Nu || !(f.annotation() == kInf))
    throw Error(ErrorCode::NotStreamType, "expected nu[inf]X. C /\\ X, got " + print_formula(f));
  Formula b = f.body();
  if (b.kind() != Conn::And || b.right().kind() != Conn::Fix || b.left().has_free_fixvar())
    throw Error(ErrorCode::NotStreamType, "expected nu[inf]X. C /\\ X, got " + print_formula(f));
  return StreamShape{b.left(), f};
}

/// obs_i : y : S |- C, built from nu_l(inf, inf) unfoldings, and_l splits,
/// weakenings and one identity.
NodeId build_observer(ProofGraph& g, const StreamShape& sh, std::uint64_t index,
                      const std::string& y) {
  Formula unfolded = unfold_fixpoint(sh.stream, kInf);  // C /\ S
  Sequent top;
  top.context = {{y, sh.stream}};
  top.conclusion = sh.element;

  // innermost first: the proof consuming the pair at level `index`
  // and_l(z, h, t, ...) then either id(h) (with t weakened) or recurse on t.
  std::function<NodeId(std::uint64_t, const std::string&)> obs =
      [&](std::uint64_t i, const std::string& yv) -> NodeId {
    std::string z = yv + "z";
    std::string h = yv + "h";
    std::string t = yv + "t";
    NodeId inner;
    if (i == 0) {
      Sequent sid;
      sid.context = {{h, sh.element}};
      sid.conclusion = sh.element;
      RuleInstance rid;
      rid.kind = RuleKind::Id;
      rid.principal = h;
      NodeId idn = g.add(Node{std::move(sid), RuleStep{std::move(rid), {}}});
      Sequent sw;
      sw.context = {{h, sh.element}, {t, sh.stream}};
      sw.conclusion = sh.element;
      RuleInstance rw;
      rw.kind = RuleKind::Weak;
      rw.principal = t;
      inner = g.add(Node{std::move(sw), RuleStep{std::move(rw), {idn}}});
    } else {
      NodeId rec = obs(i - 1, t);
      Sequent sw;
      sw.context = {{h, sh.element}, {t, sh.stream}};
      sw.conclusion = sh.element;
      RuleInstance rw;
      rw.kind = RuleKind::Weak;
      rw.principal = h;
      inner = g.add(Node{std::move(sw), RuleStep{std::move(rw), {rec}}});
    }
    Sequent sal;
    sal.context = {{z, unfolded}};
    sal.conclusion = sh.element;
    RuleInstance ral;
    ral.kind = RuleKind::AndL;
    ral.principal = z;
    ral.bound = {h, t};
    NodeId al = g.add(Node{std::move(sal), RuleStep{std::move(ral), {inner}}});
    Sequent snl;
    snl.context = {{yv, sh.stream}};
    snl.conclusion = sh.element;
    RuleInstance rnl;
    rnl.kind = RuleKind::NuL;
    rnl.outer = kInf;
    rnl.inner = kInf;
    rnl.principal = yv;
    rnl.bound = {z};
    return g.add(Node{std::move(snl), RuleStep{std::move(rnl), {al}}});
  };
  return obs(index, y);
}

}  // namespace

std::optional<Value> observe_stream(const ProofGraph& u, std::uint64_t index, std::uint64_t fuel) {
  if (!u.root_sequent().closed())
    throw Error(ErrorCode::NotStreamType, "observe_stream needs a closed proof");
  StreamShape sh = stream_shape(u.root_sequent().conclusion);
  if (!classify(sh.element).is_finitary)
    throw Error(ErrorCode::NotStreamType, "stream elements must be finitary");
  ProofGraph g;
  NodeId stream_root = graft(g, u);
  NodeId observer = build_observer(g, sh, index, "s");
  Sequent seq;
  seq.conclusion = sh.element;
  RuleInstance r;
  r.kind = RuleKind::Cut;
  r.bound = {"s"};
  g.root = g.add(Node{std::move(seq), RuleStep{std::move(r), {stream_root, observer}}});
  ReduceResult res = reduce(g, fuel);
  if (!res.normal) return std::nullopt;
  return value_of(res.proof, sh.element);
}

// ---------------------------------------------------------------------------
// Bounded observational equivalence.

namespace {

struct EquivCtx {
  unsigned depth;
  std::uint64_t fuel;
};

ProofGraph head_normal(const ProofGraph& u, std::uint64_t fuel) {
  ReduceResult r = reduce(u, fuel);
  if (!r.normal) throw Error(ErrorCode::OutOfFuel, "reduction ran out of fuel");
  return std::move(r.proof);
}



ProofGraph compose_with_arg(const ProofGraph& arg, const ProofGraph& body,
                            const std::string& var) {
  // cut(arg, var, body)
  ProofGraph g;
  NodeId a = graft(g, arg);
  NodeId b = graft(g, body);
  Sequent seq;
  seq.constraint = body.root_sequent().constraint;
  seq.conclusion = body.root_sequent().conclusion;
  for (const auto& e : body.root_sequent().context)
    if (e.first != var) seq.context.push_back(e);
  RuleInstance r;
  r.kind = RuleKind::Cut;
  r.bound = {var};
  g.root = g.add(Node{std::move(seq), RuleStep{std::move(r), {a, b}}});
  return g;
}

bool equiv_rec(const ProofGraph& u, const ProofGraph& v, const Formula& type, unsigned depth,
               const EquivCtx& cx) {
  switch (type.kind()) {
    case Conn::Top: {
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      return !nu.at(nu.root).is_back_edge() && !nv.at(nv.root).is_back_edge() &&
             nu.at(nu.root).rule_step().rule.kind == RuleKind::AxTop &&
             nv.at(nv.root).rule_step().rule.kind == RuleKind::AxTop;
    }
    case Conn::Or: {
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      if (nu.at(nu.root).is_back_edge() || nv.at(nv.root).is_back_edge()) return false;
      const RuleInstance& ru = nu.at(nu.root).rule_step().rule;
      const RuleInstance& rv = nv.at(nv.root).rule_step().rule;
      if (ru.kind != RuleKind::OrR || rv.kind != RuleKind::OrR || ru.index != rv.index)
        return false;
      return equiv_rec(subtree_proof(nu, nu.at(nu.root).rule_step().premises[0]),
                       subtree_proof(nv, nv.at(nv.root).rule_step().premises[0]),
                       ru.index == 0 ? type.left() : type.right(), depth, cx);
    }
    case Conn::And: {
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      if (nu.at(nu.root).is_back_edge() || nv.at(nv.root).is_back_edge()) return false;
      const RuleInstance& ru = nu.at(nu.root).rule_step().rule;
      const RuleInstance& rv = nv.at(nv.root).rule_step().rule;
      if (ru.kind != RuleKind::AndR || rv.kind != RuleKind::AndR) return false;
      return equiv_rec(subtree_proof(nu, nu.at(nu.root).rule_step().premises[0]),
                       subtree_proof(nv, nv.at(nv.root).rule_step().premises[0]), type.left(),
                       depth, cx) &&
             equiv_rec(subtree_proof(nu, nu.at(nu.root).rule_step().premises[1]),
                       subtree_proof(nv, nv.at(nv.root).rule_step().premises[1]), type.right(),
                       depth, cx);
    }
    case Conn::Imp: {
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      if (nu.at(nu.root).is_back_edge() || nv.at(nv.root).is_back_edge()) return false;
      const RuleInstance& ru = nu.at(nu.root).rule_step().rule;
      const RuleInstance& rv = nv.at(nv.root).rule_step().rule;
      if (ru.kind != RuleKind::ImpR || rv.kind != RuleKind::ImpR) return false;
      if (!classify(type.left()).is_finitary)
        throw Error(ErrorCode::Unsupported,
                    "implication probes need a finitary argument type, got " +
                        print_formula(type.left()));
      ProofGraph bu = subtree_proof(nu, nu.at(nu.root).rule_step().premises[0]);
      ProofGraph bv = subtree_proof(nv, nv.at(nv.root).rule_step().premises[0]);
      for (const Value& w : enumerate_values(type.left(), cx.depth)) {
        ProofGraph arg = encode_value(w, type.left());
        if (!equiv_rec(compose_with_arg(arg, bu, ru.bound[0]),
                       compose_with_arg(arg, bv, rv.bound[0]), type.right(), depth, cx))
          return false;
      }
      return true;
    }
    case Conn::Mu: {
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      if (nu.at(nu.root).is_back_edge() || nv.at(nv.root).is_back_edge()) return false;
      const RuleInstance& ru = nu.at(nu.root).rule_step().rule;
      const RuleInstance& rv = nv.at(nv.root).rule_step().rule;
      if (ru.kind != RuleKind::MuR || rv.kind != RuleKind::MuR) return false;
      return equiv_rec(subtree_proof(nu, nu.at(nu.root).rule_step().premises[0]),
                       subtree_proof(nv, nv.at(nv.root).rule_step().premises[0]),
                       unfold_fixpoint(type, kInf), depth, cx);
    }
    case Conn::Nu: {
      if (depth == 0) return true;  // bounded approximation
      ProofGraph nu = head_normal(u, cx.fuel), nv = head_normal(v, cx.fuel);
      if (nu.at(nu.root).is_back_edge() || nv.at(nv.root).is_back_edge()) return false;
      const RuleInstance& ru = nu.at(nu.root).rule_step().rule;
      const RuleInstance& rv = nv.at(nv.root).rule_step().rule;
      if (ru.kind != RuleKind::NuR || rv.kind != RuleKind::NuR) return false;
      ProofGraph bu = subst_ordinal(subtree_proof(nu, nu.at(nu.root).rule_step().premises[0]),
                                    ru.eigen);
      ProofGraph bv = subst_ordinal(subtree_proof(nv, nv.at(nv.root).rule_step().premises[0]),
                                    rv.eigen);
      return equiv_rec(bu, bv, unfold_fixpoint(type, kInf), depth - 1, cx);
    }
    case Conn::Fix:
      throw Error(ErrorCode::ScopeError, "free fixpoint variable in obs_equiv type");
  }
  return false;
}

}  // namespace

bool obs_equiv(const ProofGraph& u, const ProofGraph& v, const Formula& type, unsigned depth,
               std::uint64_t fuel) {
  if (!classify(type).is_pure)
    throw Error(ErrorCode::ShapeMismatch, "obs_equiv needs a pure sentence");
  EquivCtx cx{depth, fuel};
  return equiv_rec(u, v, type, depth, cx);
}

std::vector<Value> enumerate_values(const Formula& type, unsigned size, size_t max_count) {
  std::vector<Value> out;
  std::function<std::vector<Value>(const Formula&, unsigned)> go =
      [&](const Formula& t, unsigned budget) -> std::vector<Value> {
    std::vector<Value> vs;
    if (budget == 0) return vs;
    switch (t.kind()) {
      case Conn::Top:
        vs.push_back(Value::unit());
        break;
      case Conn::Or: {
        for (const auto& a : go(t.left(), budget)) vs.push_back(Value::inl(a));
        for (const auto& b : go(t.right(), budget)) vs.push_back(Value::inr(b));
        break;
      }
      case Conn::And: {
        for (const auto& a : go(t.left(), budget - 1))
          for (const auto& b : go(t.right(), budget - 1)) vs.push_back(Value::pair(a, b));
        break;
      }
      case Conn::Mu: {
        Formula un = unfold_fixpoint(t, kInf);
        for (const auto& a : go(un, budget - 1)) vs.push_back(Value::fold(a));
        break;
      }
      default:
        throw Error(ErrorCode::ShapeMismatch, "enumerate_values needs a finitary type");
    }
    if (vs.size() > max_count) vs.resize(max_count);
    return vs;
  };
  out = go(type, size);
  if (out.size() > max_count) out.resize(max_count);
  return out;
}

}  // namespace fixproof
