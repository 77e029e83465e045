#include "fixproof/prooffile.hpp"

#include <cctype>
#include <map>
#include <sstream>

namespace fixproof {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  size_t e = s.find_last_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '(' || c == '[' || c == '{') ++depth;
    if (c == ')' || c == ']' || c == '}') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty() || !out.empty()) out.push_back(trim(cur));
  return out;
}

[[noreturn]] void fail(size_t line, const std::string& msg) {
  throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": " + msg);
}

struct PendingBack {
  std::string companion;
  std::vector<std::pair<std::string, std::string>> bindings;
};

struct PendingNode {
  std::string id;
  size_t line = 0;
  bool has_sequent = false;
  Sequent sequent;
  bool is_back = false;
  PendingBack back;
  bool is_use = false;
  std::string use_name;
  RuleInstance rule;
  std::vector<std::string> premises;
};

OrdinalTerm parse_ord(const std::string& s, size_t line) {
  std::string t = trim(s);
  if (t.empty()) fail(line, "empty ordinal term");
  if (t == "inf") return OrdinalTerm::infinity();
  return OrdinalTerm::var(t);
}

RuleInstance parse_rule(const std::string& text, std::vector<std::string>& premises_out,
                        size_t line) {
  std::string s = trim(text);
  std::string prem_part;
  size_t pb = s.find("[premises:");
  if (pb != std::string::npos) {
    prem_part = trim(s.substr(pb + 10));
    if (prem_part.empty() || prem_part.back() != ']') fail(line, "bad premises list");
    prem_part.pop_back();
    s = trim(s.substr(0, pb));
  }
  for (const auto& p : split_top(prem_part, ','))
    if (!p.empty()) premises_out.push_back(p);

  std::string name = s;
  std::vector<std::string> args;
  size_t paren = s.find('(');
  if (paren != std::string::npos) {
    if (s.back() != ')') fail(line, "bad rule arguments");
    name = trim(s.substr(0, paren));
    for (const auto& a : split_top(s.substr(paren + 1, s.size() - paren - 2), ','))
      if (!a.empty()) args.push_back(a);
  }

  RuleInstance r;
  auto want = [&](size_t n) {
    if (args.size() != n)
      fail(line, "rule " + name + " takes " + std::to_string(n) + " arguments");
  };
  if (name == "ax_top") {
    want(0);
    r.kind = RuleKind::AxTop;
  } else if (name == "id") {
    want(1);
    r.kind = RuleKind::Id;
    r.principal = args[0];
  } else if (name == "or_r") {
    want(1);
    r.kind = RuleKind::OrR;
    r.index = std::stoi(args[0]);
  } else if (name == "or_l") {
    want(3);
    r.kind = RuleKind::OrL;
    r.principal = args[0];
    r.bound = {args[1], args[2]};
  } else if (name == "and_r") {
    want(0);
    r.kind = RuleKind::AndR;
  } else if (name == "and_l") {
    want(3);
    r.kind = RuleKind::AndL;
    r.principal = args[0];
    r.bound = {args[1], args[2]};
  } else if (name == "imp_r") {
    want(1);
    r.kind = RuleKind::ImpR;
    r.bound = {args[0]};
  } else if (name == "imp_l") {
    want(2);
    r.kind = RuleKind::ImpL;
    r.principal = args[0];
    r.bound = {args[1]};
  } else if (name == "mu_r") {
    want(2);
    r.kind = RuleKind::MuR;
    r.outer = parse_ord(args[0], line);
    r.inner = parse_ord(args[1], line);
  } else if (name == "mu_l") {
    want(4);
    r.kind = RuleKind::MuL;
    r.outer = parse_ord(args[0], line);
    r.eigen = args[1];
    r.principal = args[2];
    r.bound = {args[3]};
  } else if (name == "nu_r") {
    want(2);
    r.kind = RuleKind::NuR;
    r.outer = parse_ord(args[0], line);
    r.eigen = args[1];
  } else if (name == "nu_l") {
    want(4);
    r.kind = RuleKind::NuL;
    r.outer = parse_ord(args[0], line);
    r.inner = parse_ord(args[1], line);
    r.principal = args[2];
    r.bound = {args[3]};
  } else if (name == "weak") {
    want(1);
    r.kind = RuleKind::Weak;
    r.principal = args[0];
  } else if (name == "contr") {
    want(3);
    r.kind = RuleKind::Contr;
    r.principal = args[0];
    r.bound = {args[1], args[2]};
  } else if (name == "cut") {
    if (args.empty()) fail(line, "cut needs at least one variable");
    r.kind = RuleKind::Cut;
    r.bound = args;
  } else {
    fail(line, "unknown rule " + name);
  }
  return r;
}

struct TheoremBuilder {
  std::string name;
  bool expect_invalid = false;
  Sequent sequent;
  size_t line = 0;
  std::vector<PendingNode> nodes;
};

ProofGraph assemble(const TheoremBuilder& tb, const ProofFile& file) {
  if (tb.nodes.empty()) fail(tb.line, "theorem " + tb.name + " has no nodes");
  ProofGraph g;
  std::map<std::string, NodeId> ids;
  // first pass: allocate ids (use-nodes graft the referenced graph)
  for (const auto& pn : tb.nodes) {
    if (ids.count(pn.id)) fail(pn.line, "duplicate node id " + pn.id);
    if (pn.is_use) {
      const TheoremEntry* ref = file.find(pn.use_name);
      if (!ref) fail(pn.line, "unknown theorem " + pn.use_name);
      NodeId grafted = graft(g, ref->graph);
      if (!(g.at(grafted).sequent == pn.sequent))
        fail(pn.line, "sequent of `use " + pn.use_name + "` differs from the theorem's");
      ids[pn.id] = grafted;
    } else {
      ids[pn.id] = g.add(Node{pn.sequent, RuleStep{}});
    }
  }
  // second pass: wire rules and back edges
  for (const auto& pn : tb.nodes) {
    if (pn.is_use) continue;
    NodeId self = ids.at(pn.id);
    if (pn.is_back) {
      auto cit = ids.find(pn.back.companion);
      if (cit == ids.end()) fail(pn.line, "unknown companion " + pn.back.companion);
      BackEdge be;
      be.companion = cit->second;
      const Sequent& cs = g.at(be.companion).sequent;
      for (const auto& [lhs, rhs] : pn.back.bindings) {
        bool is_ord = lhs == "inf" || cs.constraint.contains_var(lhs);
        bool is_var = cs.find(lhs) != nullptr;
        if (is_ord && is_var)
          fail(pn.line, "binding " + lhs + " is both an ordinal and a context variable");
        if (is_ord) {
          be.ord_renaming[parse_ord(lhs, pn.line)] = parse_ord(rhs, pn.line);
        } else if (is_var) {
          be.var_renaming[lhs] = rhs;
        } else {
          fail(pn.line, "binding " + lhs + " not found in companion sequent");
        }
      }
      g.at(self).step = std::move(be);
    } else {
      RuleStep rs;
      rs.rule = pn.rule;
      for (const auto& p : pn.premises) {
        auto it = ids.find(p);
        if (it == ids.end()) fail(pn.line, "unknown premise " + p);
        rs.premises.push_back(it->second);
      }
      g.at(self).step = std::move(rs);
    }
  }
  g.root = ids.at(tb.nodes.front().id);
  if (!(g.root_sequent() == tb.sequent))
    fail(tb.line, "root node sequent differs from the theorem header");

  // derive back-edge sequents from their parents
  for (NodeId i = 0; i < g.size(); ++i) {
    if (g.at(i).is_back_edge()) continue;
    const RuleStep& rs = g.at(i).rule_step();
    for (NodeId p : rs.premises) {
      if (!g.at(p).is_back_edge()) continue;
      const RuleInstance& r = g.at(i).rule_step().rule;
      ConstraintForest o = g.at(i).sequent.constraint;
      if (r.kind == RuleKind::MuL || r.kind == RuleKind::NuR) o = o.extend(r.outer, r.eigen);
      BackEdge& be = g.at(p).back_edge();
      const Sequent& cs = g.at(be.companion).sequent;
      Sequent leaf;
      leaf.constraint = o;
      auto mo = [&](const OrdinalTerm& t) { return be.ord(t); };
      for (const auto& [x, f] : cs.context)
        leaf.context.emplace_back(be.var(x), f.map_ordinals(mo));
      leaf.conclusion = cs.conclusion.map_ordinals(mo);
      g.at(p).sequent = std::move(leaf);
    }
  }
  return g;
}

}  // namespace

const TheoremEntry* ProofFile::find(const std::string& name) const {
  for (const auto& t : theorems)
    if (t.name == name) return &t;
  return nullptr;
}

Sequent parse_sequent(const std::string& text, const AbbrevEnv* env) {
  size_t semi = text.find(';');
  if (semi == std::string::npos)
    throw Error(ErrorCode::ParseError, "sequent needs ';': " + text);
  size_t ts = text.find("|-", semi);
  if (ts == std::string::npos)
    throw Error(ErrorCode::ParseError, "sequent needs '|-': " + text);
  Sequent s;
  s.constraint = ConstraintForest::parse(trim(text.substr(0, semi)));
  std::string ctx = trim(text.substr(semi + 1, ts - semi - 1));
  for (const auto& entry : split_top(ctx, ',')) {
    if (entry.empty()) continue;
    size_t colon = entry.find(':');
    if (colon == std::string::npos)
      throw Error(ErrorCode::ParseError, "context entry needs ':': " + entry);
    s.context.emplace_back(trim(entry.substr(0, colon)),
                           parse_formula(trim(entry.substr(colon + 1)), env));
  }
  s.conclusion = parse_formula(trim(text.substr(ts + 2)), env);
  return s;
}

std::string print_sequent(const Sequent& s) { return s.to_string(); }

ProofFile parse_proof_file(const std::string& text) {
  ProofFile file;
  std::istringstream in(text);
  std::string raw;
  size_t lineno = 0;
  TheoremBuilder* open = nullptr;
  std::vector<TheoremBuilder> builders;

  auto flush = [&](TheoremBuilder& tb) {
    TheoremEntry entry;
    entry.name = tb.name;
    entry.expect_invalid = tb.expect_invalid;
    entry.graph = assemble(tb, file);
    file.theorems.push_back(std::move(entry));
  };

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim(raw);
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "formula") {
      std::string name;
      ls >> name;
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      if (rest.empty() || rest[0] != '=') fail(lineno, "expected '=' in formula line");
      if (name == "T" || name == "X" || name == "mu" || name == "nu" || name == "inf")
        fail(lineno, "reserved abbreviation name " + name);
      file.abbrevs[name] = parse_formula(trim(rest.substr(1)), &file.abbrevs);
      continue;
    }
    if (kw == "theorem") {
      if (open) {
        flush(*open);
        open = nullptr;
        builders.clear();
      }
      std::string name;
      ls >> name;
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      builders.emplace_back();
      open = &builders.back();
      open->name = name;
      open->line = lineno;
      if (rest.rfind("[invalid]", 0) == 0) {
        open->expect_invalid = true;
        rest = trim(rest.substr(9));
      }
      if (rest.empty() || rest[0] != ':') fail(lineno, "expected ':' in theorem line");
      open->sequent = parse_sequent(trim(rest.substr(1)), &file.abbrevs);
      continue;
    }
    if (kw == "node") {
      if (!open) fail(lineno, "node outside a theorem");
      PendingNode pn;
      pn.line = lineno;
      ls >> pn.id;
      std::string rest;
      std::getline(ls, rest);
      rest = trim(rest);
      if (rest.rfind("=", 0) == 0 && trim(rest.substr(1)).rfind("back", 0) == 0) {
        pn.is_back = true;
        std::string b = trim(rest.substr(1));
        b = trim(b.substr(4));
        size_t brace = b.find('{');
        if (brace == std::string::npos) fail(lineno, "back edge needs '{ bindings }'");
        pn.back.companion = trim(b.substr(0, brace));
        std::string binds = trim(b.substr(brace + 1));
        if (binds.empty() || binds.back() != '}') fail(lineno, "back edge needs closing '}'");
        binds.pop_back();
        for (const auto& one : split_top(binds, ',')) {
          if (one.empty()) continue;
          size_t eq = one.find('=');
          if (eq == std::string::npos) fail(lineno, "binding needs '=': " + one);
          pn.back.bindings.emplace_back(trim(one.substr(0, eq)), trim(one.substr(eq + 1)));
        }
      } else {
        if (rest.empty() || rest[0] != ':') fail(lineno, "expected ':' after node id");
        size_t eq = rest.find('=');
        // '=' separating sequent from rule: the sequent itself has no '='
        if (eq == std::string::npos) fail(lineno, "expected '=' after node sequent");
        pn.has_sequent = true;
        pn.sequent = parse_sequent(trim(rest.substr(1, eq - 1)), &file.abbrevs);
        std::string rule = trim(rest.substr(eq + 1));
        if (rule.rfind("use ", 0) == 0 || rule == "use") {
          pn.is_use = true;
          pn.use_name = trim(rule.substr(3));
          if (pn.use_name.empty()) fail(lineno, "use needs a theorem name");
        } else {
          pn.rule = parse_rule(rule, pn.premises, lineno);
        }
      }
      open->nodes.push_back(std::move(pn));
      continue;
    }
    fail(lineno, "unknown directive " + kw);
  }
  if (open) flush(*open);
  return file;
}

// ---------------------------------------------------------------------------

namespace {

void print_node(const ProofGraph& g, NodeId n, const std::map<NodeId, std::string>& names,
                std::ostream& os) {
  const Node& nd = g.at(n);
  if (nd.is_back_edge()) {
    const BackEdge& be = nd.back_edge();
    os << "node " << names.at(n) << " = back " << names.at(be.companion) << " { ";
    bool first = true;
    for (const auto& [t, img] : be.ord_renaming) {
      if (t == img) continue;
      if (!first) os << ", ";
      first = false;
      os << t.to_string() << " = " << img.to_string();
    }
    for (const auto& [x, y] : be.var_renaming) {
      if (x == y) continue;
      if (!first) os << ", ";
      first = false;
      os << x << " = " << y;
    }
    os << " }\n";
    return;
  }
  os << "node " << names.at(n) << " : " << nd.sequent.to_string() << " = "
     << nd.rule_step().rule.to_string();
  if (!nd.rule_step().premises.empty()) {
    os << " [premises: ";
    bool first = true;
    for (NodeId p : nd.rule_step().premises) {
      if (!first) os << ", ";
      first = false;
      os << names.at(p);
    }
    os << "]";
  }
  os << "\n";
}

}  // namespace

std::string print_theorem(const std::string& name, const ProofGraph& g) {
  std::ostringstream os;
  os << "theorem " << name << " : " << g.root_sequent().to_string() << "\n";
  // DFS preorder naming
  std::map<NodeId, std::string> names;
  std::vector<NodeId> order;
  std::vector<NodeId> stack{g.root};
  std::vector<bool> seen(g.size(), false);
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    if (seen[n]) continue;
    seen[n] = true;
    order.push_back(n);
    if (!g.at(n).is_back_edge()) {
      const auto& ps = g.at(n).rule_step().premises;
      for (auto it = ps.rbegin(); it != ps.rend(); ++it) stack.push_back(*it);
    }
  }
  for (size_t i = 0; i < order.size(); ++i) names[order[i]] = "n" + std::to_string(i);
  for (NodeId n : order) print_node(g, n, names, os);
  return os.str();
}

}  // namespace fixproof
