#include "fixproof/constraints.hpp"

#include <algorithm>
#include <sstream>

namespace fixproof {

std::vector<std::string> ConstraintForest::variables() const {
  std::vector<std::string> out;
  out.reserve(parent_.size());
  for (const auto& [v, p] : parent_) out.push_back(v);
  return out;
}

OrdinalTerm ConstraintForest::parent_of(const std::string& v) const {
  auto it = parent_.find(v);
  if (it == parent_.end()) throw Error(ErrorCode::UnknownTerm, "variable " + v + " not in constraint");
  return it->second;
}

bool ConstraintForest::is_root_child(const std::string& v) const {
  auto it = parent_.find(v);
  return it != parent_.end() && it->second.is_infinity();
}

bool ConstraintForest::entails(const OrdinalTerm& a, const OrdinalTerm& b) const {
  if (!contains(a)) throw Error(ErrorCode::UnknownTerm, "term " + a.to_string() + " not in constraint");
  if (!contains(b)) throw Error(ErrorCode::UnknownTerm, "term " + b.to_string() + " not in constraint");
  if (b.is_infinity()) return true;  // includes inf < inf
  if (a.is_infinity()) return false;
  if (a == b) return false;
  // walk from a to the root
  OrdinalTerm cur = parent_of(a.name());
  while (cur.is_var()) {
    if (cur == b) return true;
    cur = parent_of(cur.name());
  }
  return false;
}

ConstraintForest ConstraintForest::extend(const OrdinalTerm& at, const std::string& fresh) const {
  if (!contains(at)) throw Error(ErrorCode::UnknownTerm, "term " + at.to_string() + " not in constraint");
  if (fresh.empty() || contains_var(fresh))
    throw Error(ErrorCode::NameClash, "variable " + fresh + " already labels a vertex");
  ConstraintForest out = *this;
  out.parent_[fresh] = at;
  return out;
}

ConstraintForest ConstraintForest::contract_root_child(const std::string& a) const {
  auto it = parent_.find(a);
  if (it == parent_.end()) throw Error(ErrorCode::UnknownTerm, "variable " + a + " not in constraint");
  if (!it->second.is_infinity())
    throw Error(ErrorCode::NotChildOfRoot, "variable " + a + " is not a child of inf");
  ConstraintForest out;
  for (const auto& [v, p] : parent_) {
    if (v == a) continue;
    out.parent_[v] = (p.is_var() && p.name() == a) ? OrdinalTerm::infinity() : p;
  }
  return out;
}

std::string ConstraintForest::to_string() const {
  if (parent_.empty()) return "";
  // Print one chain per leaf, each running up to the root.
  std::map<std::string, bool> has_child;
  for (const auto& [v, p] : parent_) {
    if (has_child.find(v) == has_child.end()) has_child[v] = false;
    if (p.is_var()) has_child[p.name()] = true;
  }
  std::ostringstream os;
  bool first_chain = true;
  for (const auto& [v, leaf] : has_child) {
    if (leaf) continue;
    if (!first_chain) os << ", ";
    first_chain = false;
    OrdinalTerm cur = OrdinalTerm::var(v);
    os << v;
    while (cur.is_var()) {
      cur = parent_of(cur.name());
      os << " < " << cur.to_string();
    }
  }
  return os.str();
}

ConstraintForest ConstraintForest::parse(const std::string& text) {
  ConstraintForest out;
  auto trim = [](std::string s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return std::string();
    return s.substr(b, e - b + 1);
  };
  std::stringstream chains(text);
  std::string chain;
  while (std::getline(chains, chain, ',')) {
    chain = trim(chain);
    if (chain.empty()) continue;
    std::vector<std::string> items;
    size_t pos = 0;
    while (true) {
      size_t lt = chain.find('<', pos);
      if (lt == std::string::npos) {
        items.push_back(trim(chain.substr(pos)));
        break;
      }
      items.push_back(trim(chain.substr(pos, lt - pos)));
      pos = lt + 1;
    }
    if (items.size() < 2 || items.back() != "inf")
      throw Error(ErrorCode::ParseError, "constraint chain must end in inf: " + chain);
    for (size_t i = 0; i + 1 < items.size(); ++i) {
      const std::string& child = items[i];
      const std::string& par = items[i + 1];
      if (child == "inf") throw Error(ErrorCode::ParseError, "inf cannot be below another term");
      OrdinalTerm parent = (par == "inf") ? OrdinalTerm::infinity() : OrdinalTerm::var(par);
      auto it = out.parent_.find(child);
      if (it != out.parent_.end()) {
        if (it->second != parent)
          throw Error(ErrorCode::ParseError, "variable " + child + " with two distinct parents");
      } else {
        out.parent_[child] = parent;
      }
    }
  }
  // reject cycles: every variable must reach the root
  for (const auto& [v, p] : out.parent_) {
    OrdinalTerm cur = p;
    size_t steps = 0;
    while (cur.is_var()) {
      if (++steps > out.parent_.size())
        throw Error(ErrorCode::ParseError, "constraint contains a cycle through " + v);
      if (!out.contains_var(cur.name()))
        throw Error(ErrorCode::ParseError, "variable " + cur.name() + " used as parent but never introduced");
      cur = out.parent_.at(cur.name());
    }
  }
  return out;
}

}  // namespace fixproof
