#ifndef FIXPROOF_PROOFFILE_HPP
#define FIXPROOF_PROOFFILE_HPP

#include <string>
#include <vector>

#include "fixproof/kernel.hpp"

namespace fixproof {

/// A parsed proof file: formula abbreviations plus named theorems, each a
/// proof graph. Theorems flagged [invalid] are negative examples expected to
/// fail the validity check.
struct TheoremEntry {
  std::string name;
  bool expect_invalid = false;
  ProofGraph graph;
};

struct ProofFile {
  AbbrevEnv abbrevs;
  std::vector<TheoremEntry> theorems;

  const TheoremEntry* find(const std::string& name) const;
};

/// Line-oriented surface syntax:
///   # comment
///   formula NAME = FORMULA
///   theorem NAME [invalid] : CONSTRAINT ; CTX |- FORMULA
///   node ID : CONSTRAINT ; CTX |- FORMULA = RULE [premises: ID, ID]
///   node ID = back COMPANION { lhs = rhs, ... }
///   node ID : CONSTRAINT ; CTX |- FORMULA = use THEOREM
/// The first node after a theorem header is the root. Back-edge sequents are
/// derived from the parent rule and the companion.
ProofFile parse_proof_file(const std::string& text);

/// Sequent surface form "b < a < inf ; x : F |- G".
Sequent parse_sequent(const std::string& text, const AbbrevEnv* env);

std::string print_sequent(const Sequent& s);

/// Render one theorem in the file syntax (node ids regenerated).
std::string print_theorem(const std::string& name, const ProofGraph& g);

}  // namespace fixproof

#endif
