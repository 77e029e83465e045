#ifndef FIXPROOF_TESTS_HELPERS_HPP
#define FIXPROOF_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "fixproof/prooffile.hpp"

namespace testutil {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline const fixproof::ProofFile& corpus() {
  static fixproof::ProofFile file =
      fixproof::parse_proof_file(slurp(std::string(CORPUS_DIR) + "/paper.prf"));
  return file;
}

inline const fixproof::ProofFile& negative_corpus() {
  static fixproof::ProofFile file =
      fixproof::parse_proof_file(slurp(std::string(CORPUS_DIR) + "/negative.prf"));
  return file;
}

inline const fixproof::ProofGraph& thm(const std::string& name) {
  const fixproof::TheoremEntry* t = corpus().find(name);
  if (!t) throw std::runtime_error("no corpus theorem " + name);
  return t->graph;
}

}  // namespace testutil

#endif
