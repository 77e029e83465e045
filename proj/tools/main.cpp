// Command-line front end: check proof files, run numeric proofs, observe
// streams, derive algebra/coalgebra proofs.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "fixproof/algebra.hpp"
#include "fixproof/prooffile.hpp"
#include "fixproof/validity.hpp"

using namespace fixproof;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Output {
  bool structured = false;

  void emit(const json& j, const std::string& text) const {
    if (structured)
      std::cout << j.dump() << "\n";
    else
      std::cout << text << "\n";
  }
};

int cmd_check(const std::string& path, const Output& out) {
  ProofFile file;
  try {
    file = parse_proof_file(slurp(path));
  } catch (const Error& e) {
    out.emit(json{{"kind", "error"}, {"code", error_code_name(e.code())}, {"message", e.what()}},
             std::string("parse error: ") + e.what());
    return 2;
  }
  bool any_invalid = false;
  for (const auto& thm : file.theorems) {
    if (auto err = check_graph(thm.graph)) {
      json j{{"kind", "error"},
             {"theorem", thm.name},
             {"code", error_code_name(err->code())},
             {"message", err->what()}};
      if (err->node()) j["node"] = *err->node();
      out.emit(j, thm.name + ": kernel error: " + err->what());
      return 2;
    }
    ValidityResult v = check_validity(thm.graph);
    if (v.valid) {
      out.emit(json{{"kind", "check"}, {"theorem", thm.name}, {"status", "valid"}},
               thm.name + ": valid");
    } else {
      any_invalid = true;
      json j{{"kind", "check"},
             {"theorem", thm.name},
             {"status", "invalid"},
             {"witness", v.witness},
             {"message", v.message}};
      std::ostringstream os;
      os << thm.name << ": INVALID (" << v.message << "; cycle:";
      for (NodeId n : v.witness) os << " " << n;
      os << ")";
      out.emit(j, os.str());
    }
  }
  return any_invalid ? 1 : 0;
}

void print_trace(const std::vector<TraceStep>& trace, const Output& out) {
  for (const auto& step : trace) {
    json j{{"kind", "step"}, {"rule", rewrite_rule_name(step.rule)}, {"position", step.position}};
    std::ostringstream os;
    os << "step " << rewrite_rule_name(step.rule) << " at [";
    for (size_t i = 0; i < step.position.size(); ++i) {
      if (i) os << ",";
      os << step.position[i];
    }
    os << "]";
    out.emit(j, os.str());
  }
}

int cmd_run(const std::string& path, const std::string& name,
            const std::vector<std::string>& raw_args, std::uint64_t fuel, bool trace,
            const Output& out) {
  ProofFile file = parse_proof_file(slurp(path));
  const TheoremEntry* thm = file.find(name);
  if (!thm) {
    out.emit(json{{"kind", "error"}, {"message", "unknown theorem " + name}},
             "unknown theorem " + name);
    return 2;
  }
  if (auto err = check_graph(thm->graph)) {
    out.emit(json{{"kind", "error"}, {"message", err->what()}},
             std::string("kernel error: ") + err->what());
    return 2;
  }
  const Sequent& seq = thm->graph.root_sequent();
  if (seq.context.size() != raw_args.size()) {
    out.emit(json{{"kind", "error"}, {"message", "arity mismatch"}},
             "theorem takes " + std::to_string(seq.context.size()) + " arguments");
    return 2;
  }
  std::vector<ProofGraph> args;
  for (size_t i = 0; i < raw_args.size(); ++i)
    args.push_back(encode_value(parse_value(raw_args[i]), seq.context[i].second));
  ReduceResult res = reduce(apply_args(thm->graph, args), fuel);
  if (trace) print_trace(res.trace, out);
  if (!res.normal) {
    out.emit(json{{"kind", "result"}, {"status", "out_of_fuel"}}, "OUT_OF_FUEL");
    return 1;
  }
  Value v = value_of(res.proof, seq.conclusion);
  out.emit(json{{"kind", "result"}, {"value", v.to_string(&seq.conclusion)}},
           v.to_string(&seq.conclusion));
  return 0;
}

int cmd_observe(const std::string& path, const std::string& name, std::uint64_t index,
                std::uint64_t fuel, const Output& out) {
  ProofFile file = parse_proof_file(slurp(path));
  const TheoremEntry* thm = file.find(name);
  if (!thm) {
    out.emit(json{{"kind", "error"}, {"message", "unknown theorem " + name}},
             "unknown theorem " + name);
    return 2;
  }
  if (auto err = check_graph(thm->graph)) {
    out.emit(json{{"kind", "error"}, {"message", err->what()}},
             std::string("kernel error: ") + err->what());
    return 2;
  }
  auto v = observe_stream(thm->graph, index, fuel);
  if (!v) {
    out.emit(json{{"kind", "result"}, {"status", "out_of_fuel"}}, "OUT_OF_FUEL");
    return 1;
  }
  Formula elem = thm->graph.root_sequent().conclusion.body().left();
  out.emit(json{{"kind", "result"}, {"index", index}, {"value", v->to_string(&elem)}},
           v->to_string(&elem));
  return 0;
}

int cmd_derive(const std::string& kind, const std::string& path, const std::string& functor_text,
               const std::string& arg_name, const std::string& out_path, const Output& out) {
  ProofFile file = parse_proof_file(slurp(path));
  FunctorBody body(parse_formula(functor_text, &file.abbrevs, false));

  const ProofGraph* arg = nullptr;
  if (!arg_name.empty()) {
    const TheoremEntry* thm = file.find(arg_name);
    if (!thm) {
      out.emit(json{{"kind", "error"}, {"message", "unknown theorem " + arg_name}},
               "unknown theorem " + arg_name);
      return 2;
    }
    arg = &thm->graph;
  }

  std::ostringstream derived;
  if (kind == "fold") {
    if (!arg) throw Error(ErrorCode::ArityMismatch, "fold needs an algebra theorem");
    derived << print_theorem("derived_fold", fold(body, *arg));
  } else if (kind == "unfold") {
    if (!arg) throw Error(ErrorCode::ArityMismatch, "unfold needs a coalgebra theorem");
    derived << print_theorem("derived_unfold", unfold_coalg(body, *arg));
  } else if (kind == "lift") {
    if (!arg) throw Error(ErrorCode::ArityMismatch, "lift needs an arrow theorem");
    derived << print_theorem("derived_lift", lift_functor(body, *arg));
  } else if (kind == "algebra-maps") {
    AlgebraMaps maps = algebra_maps(body);
    derived << print_theorem("derived_in", maps.into);
    derived << print_theorem("derived_out", maps.out);
  } else {
    out.emit(json{{"kind", "error"}, {"message", "unknown derive kind " + kind}},
             "unknown derive kind " + kind + " (expected fold|unfold|lift|algebra-maps)");
    return 2;
  }

  std::string text = derived.str();
  // derived proofs re-check before they are written
  ProofFile check = parse_proof_file(text);
  for (const auto& t : check.theorems) {
    if (auto err = check_graph(t.graph))
      throw Error(err->code(), std::string("derived proof fails to check: ") + err->what());
    if (!check_validity(t.graph).valid)
      throw Error(ErrorCode::Internal, "derived proof is not valid");
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream os(out_path);
    os << text;
  }
  out.emit(json{{"kind", "derive"}, {"status", "ok"}}, "derived proofs check and are valid");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"checker and evaluator for cyclic fixpoint proofs"};
  app.require_subcommand(1);

  Output out;
  std::string emit = "text";
  app.add_option("--emit", emit, "output mode: text or structured")
      ->check(CLI::IsMember({"text", "structured"}));

  std::uint64_t fuel = 1000000;
  app.add_option("--fuel", fuel, "reduction step budget");
  unsigned depth = 3;
  app.add_option("--depth", depth, "observation/equivalence depth bound");
  bool trace = false;
  app.add_flag("--trace", trace, "dump rewrite traces");

  std::string path, theorem, functor_text, arg_name, out_path = "-";
  std::vector<std::string> run_args;
  std::uint64_t index = 0;
  std::string derive_kind;

  auto* check = app.add_subcommand("check", "check all theorems in a file");
  check->add_option("file", path)->required();

  auto* run = app.add_subcommand("run", "run a proof as a function");
  run->add_option("file", path)->required();
  run->add_option("theorem", theorem)->required();
  run->add_option("args", run_args, "argument values");

  auto* observe = app.add_subcommand("observe", "observe one stream element");
  observe->add_option("file", path)->required();
  observe->add_option("theorem", theorem)->required();
  observe->add_option("index", index)->required();

  auto* derive = app.add_subcommand("derive", "derive fold/unfold/lift/algebra-maps proofs");
  derive->add_option("kind", derive_kind)->required();
  derive->add_option("file", path)->required();
  derive->add_option("--functor", functor_text, "functor body over X")->required();
  derive->add_option("--arg", arg_name, "argument theorem name");
  derive->add_option("-o,--out", out_path, "output file ('-' for stdout)");

  CLI11_PARSE(app, argc, argv);
  out.structured = emit == "structured";

  try {
    if (*check) return cmd_check(path, out);
    if (*run) return cmd_run(path, theorem, run_args, fuel, trace, out);
    if (*observe) return cmd_observe(path, theorem, index, fuel, out);
    if (*derive) return cmd_derive(derive_kind, path, functor_text, arg_name, out_path, out);
  } catch (const Error& e) {
    out.emit(json{{"kind", "error"}, {"code", error_code_name(e.code())}, {"message", e.what()}},
             std::string("error: ") + e.what());
    return 2;
  }
  return 2;
}
