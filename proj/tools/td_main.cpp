#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "td/catalog.hpp"
#include "td/dsl.hpp"
#include "td/evaluate.hpp"
#include "td/fingerprint.hpp"
#include "td/identities.hpp"
#include "td/oracles.hpp"
#include "td/segments.hpp"
#include "td/wiring.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFails = 1;
constexpr int kExitUsage = 2;
constexpr double kEnumerativeGuard = 1e8;

struct Shared {
  int dim = 3;
  uint64_t seed = 0;
  int trials = 25;
  std::string field = "rat";
  std::string evaluator = "contract";
  bool json = false;
  bool regen_golden = false;
  std::string golden_dir;
  int workers = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

td::Evaluator pick_evaluator(const Shared& sh) {
  if (sh.evaluator == "enum") return td::Evaluator::kEnumerative;
  if (sh.evaluator == "contract") return td::Evaluator::kContracted;
  throw CLI::ValidationError("--evaluator must be enum or contract");
}

// builtin targets need bindings; sample integer ones from the seed
void autobind(td::Environment<td::Rational>& env, const td::DiagramGraph& g, uint64_t seed) {
  td::Sampler smp(seed, 0);
  for (const td::Edge& e : g.edges) {
    for (const td::Marking& m : e.markings)
      if (!env.matrices.count(m.matrix)) env.bind_matrix(m.matrix, smp.int_matrix(env.dim));
    if (e.closed) continue;
    for (const td::Attachment* a : {&e.end1, &e.end2})
      if (const auto* vi = std::get_if<td::VectorInput>(a))
        if (!env.vectors.count(vi->name)) env.bind_vector(vi->name, smp.int_vector(env.dim));
  }
}

template <class S>
void print_tensor(const td::Tensor<S>& t, bool json) {
  if (json) {
    std::cout << td::dsl::tensor_to_json(t) << "\n";
    return;
  }
  if (t.arity() == 0) {
    std::cout << td::Field<S>::str(t.value()) << "\n";
    return;
  }
  std::vector<int> idx(t.arity(), 1);
  size_t off = 0;
  do {
    std::cout << "[";
    for (size_t i = 0; i < idx.size(); ++i) std::cout << (i ? "," : "") << idx[i];
    std::cout << "] " << td::Field<S>::str(t.entries()[off++]) << "\n";
  } while (td::Tensor<S>::next_index(idx, t.dim()));
}

int cmd_eval(const Shared& sh, const std::string& file, const std::string& target) {
  td::DiagramExpression expr;
  td::Environment<td::Rational> env(sh.dim);
  if (!file.empty()) {
    td::dsl::Document doc = td::dsl::parse(read_file(file));
    env = doc.environment();
    expr = doc.materialize(target);
  } else {
    td::DiagramGraph g = td::catalog::build_target(target, sh.dim);
    autobind(env, g, sh.seed);
    expr = td::DiagramExpression::of(g);
  }
  td::Evaluator which = pick_evaluator(sh);
  if (sh.field == "f64") {
    td::Environment<double> fenv = td::to_f64(env);
    print_tensor(td::evaluate_expression(expr, fenv, which, sh.workers), sh.json);
  } else {
    print_tensor(td::evaluate_expression(expr, env, which, sh.workers), sh.json);
  }
  return kExitOk;
}

void print_report(const td::identities::IdentityReport& rep) {
  std::ostringstream os;
  os << rep.name;
  std::string pad(rep.name.size() < 28 ? 28 - rep.name.size() : 1, ' ');
  os << pad << (rep.holds ? "holds" : "FAILS") << "  " << rep.strategy << "  trials="
     << rep.trials << "  " << std::fixed << rep.elapsed_seconds << "s";
  std::cout << os.str() << "\n";
  if (!rep.holds && !rep.counterexample.empty())
    std::cout << "  counterexample: " << rep.counterexample << "\n";
}

int cmd_verify(const Shared& sh, const std::string& file, const std::string& builtin,
               const std::string& lhs, const std::string& rhs, const std::string& strategy,
               const std::vector<std::string>& slots) {
  td::identities::IdentityReport rep;
  if (!builtin.empty()) {
    if (builtin == "tr3" || builtin == "tr4") {
      auto rel = builtin == "tr3" ? td::identities::tr3_relation(sh.seed)
                                  : td::identities::tr4_relation(sh.seed);
      std::cout << builtin << ": " << rel.printable() << "\n";
      if (!rel.ok()) {
        std::cout << "extraction failed: " << rel.failure << "\n";
        return kExitFails;
      }
      auto reports = td::identities::run_identity_suite(sh.seed, sh.trials, sh.workers);
      for (const auto& r : reports)
        if (r.name == builtin) {
          print_report(r);
          return r.holds ? kExitOk : kExitFails;
        }
      return kExitFails;
    }
    for (const auto& r : td::identities::run_identity_suite(sh.seed, sh.trials, sh.workers))
      if (r.name == builtin) {
        print_report(r);
        return r.holds ? kExitOk : kExitFails;
      }
    throw CLI::ValidationError("unknown builtin identity: " + builtin);
  }
  td::dsl::Document doc = td::dsl::parse(read_file(file));
  td::DiagramExpression le = doc.materialize(lhs);
  td::DiagramExpression re = doc.materialize(rhs);
  if (le.arity != re.arity) {
    std::cerr << "error: lhs arity " << le.arity << " != rhs arity " << re.arity << "\n";
    return kExitUsage;
  }
  if (strategy == "basis") {
    rep = td::identities::verify_on_basis(lhs + " vs " + rhs, le, re, slots, doc.environment());
  } else {
    std::vector<std::string> symbols;
    for (const auto& [name, m] : doc.matrices) symbols.push_back(name);
    rep = td::identities::verify_randomized(lhs + " vs " + rhs, le, re, symbols, sh.trials,
                                            sh.seed, -9, 9, {}, sh.workers);
  }
  print_report(rep);
  return rep.holds ? kExitOk : kExitFails;
}

int cmd_suite(const Shared& sh) {
  std::cout << "binor convention: " << td::wiring::binor_convention_description() << "\n";
  auto reports = td::identities::run_identity_suite(sh.seed, sh.trials, sh.workers);
  bool all = true;
  for (const auto& r : reports) {
    print_report(r);
    all = all && r.holds;
  }

  auto constants = td::identities::measure_char_coeff_constants(
      std::max(sh.trials, 10), sh.seed);
  std::string text = td::identities::char_coeff_constants_to_text(constants);
  std::cout << "char-coeff constants (n k c):\n" << text;
  if (!sh.golden_dir.empty()) {
    std::string path = sh.golden_dir + "/char_coeff_constants.txt";
    auto rel3 = td::identities::tr3_relation(sh.seed);
    auto rel4 = td::identities::tr4_relation(sh.seed);
    if (sh.regen_golden) {
      write_file(path, text);
      write_file(sh.golden_dir + "/tr3.txt", td::fingerprint::relation_to_text(rel3));
      write_file(sh.golden_dir + "/tr4.txt", td::fingerprint::relation_to_text(rel4));
      std::cout << "golden files regenerated in " << sh.golden_dir << "\n";
    } else {
      bool golden_ok = read_file(path) == text &&
                       read_file(sh.golden_dir + "/tr3.txt") ==
                           td::fingerprint::relation_to_text(rel3) &&
                       read_file(sh.golden_dir + "/tr4.txt") ==
                           td::fingerprint::relation_to_text(rel4);
      std::cout << "golden comparison: " << (golden_ok ? "match" : "MISMATCH") << "\n";
      all = all && golden_ok;
    }
  }
  std::cout << (all ? "suite: all hold" : "suite: FAILURES") << "\n";
  return all ? kExitOk : kExitFails;
}

int cmd_expand(const Shared& sh, const std::vector<std::string>& ladder_names, bool open,
               bool do_fingerprint) {
  if (ladder_names.empty()) throw CLI::ValidationError("--ladder needs matrix names");
  td::wiring::WiringTerm lad = td::wiring::ladder(ladder_names);
  if (open) lad.closed = false;
  td::DiagramExpression expansion = td::wiring::binor_expand(lad);
  std::cout << "ladder k=" << ladder_names.size() << (open ? " (open)" : " (closed)") << ": "
            << expansion.terms.size() << " terms\n";
  td::dsl::Document doc;
  doc.dim = 2;
  td::dsl::Document::Expr sum;
  sum.name = "expansion";
  for (size_t i = 0; i < expansion.terms.size(); ++i) {
    std::string name = "term" + std::to_string(i);
    doc.diagrams.emplace_back(name, expansion.terms[i].second);
    sum.terms.emplace_back(expansion.terms[i].first, name);
  }
  doc.exprs.push_back(std::move(sum));
  std::cout << td::dsl::serialize(doc);
  if (do_fingerprint) {
    if (open) {
      std::cerr << "error: fingerprint needs a closed ladder\n";
      return kExitUsage;
    }
    auto rel = td::fingerprint::extract_ladder_identity(ladder_names, sh.seed);
    if (!rel.ok()) {
      std::cout << "fingerprint failed: " << rel.failure << "\n";
      return kExitFails;
    }
    std::cout << "identity: " << rel.printable() << "\n";
    std::cout << "zero form:\n" << td::fingerprint::relation_to_text(rel);
  }
  return kExitOk;
}

int cmd_render(const Shared& sh, const std::string& file, const std::string& target,
               const std::string& out_path) {
  td::DiagramGraph g;
  if (!file.empty()) {
    td::dsl::Document doc = td::dsl::parse(read_file(file));
    const td::DiagramGraph* found = doc.find_diagram(target);
    if (found == nullptr) throw std::runtime_error("unknown diagram: " + target);
    g = *found;
  } else {
    g = td::catalog::build_target(target, sh.dim);
  }
  std::string text = td::dsl::to_dot(g);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kExitOk;
}

template <class S>
double time_eval(const td::DiagramGraph& g, const td::Environment<S>& env, td::Evaluator which,
                 td::Tensor<S>& out, int workers) {
  auto t0 = std::chrono::steady_clock::now();
  out = td::evaluate(g, env, which, workers);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(const Shared& sh, const std::string& target, const std::string& mode) {
  td::DiagramGraph g = td::catalog::build_target(target, sh.dim);
  td::Environment<td::Rational> env(sh.dim);
  autobind(env, g, sh.seed);
  bool run_enum = mode == "both" || mode == "enum";
  bool run_contract = mode == "both" || mode == "contract";
  double cost = td::enumerative_cost(g);
  std::cout << "target " << target << " dim " << sh.dim << " (enumerative cost ~" << cost
            << " labelings/cell)\n";

  auto bench_field = [&](auto fenv, const char* field_name) {
    using S = typename decltype(fenv.matrices)::mapped_type::value_type::value_type;
    td::Tensor<S> te, tc;
    bool enum_ran = false;
    if (run_enum) {
      if (cost > kEnumerativeGuard) {
        std::cout << "  [" << field_name << "] enumerative skipped: cost " << cost
                  << " exceeds guard " << kEnumerativeGuard << "\n";
      } else {
        double s = time_eval(g, fenv, td::Evaluator::kEnumerative, te, sh.workers);
        std::cout << "  [" << field_name << "] enumerative: " << s << "s\n";
        enum_ran = true;
      }
    }
    if (run_contract) {
      double s = time_eval(g, fenv, td::Evaluator::kContracted, tc, sh.workers);
      std::cout << "  [" << field_name << "] contracted:  " << s << "s\n";
    }
    if (enum_ran && run_contract) {
      bool equal;
      if constexpr (std::is_same_v<S, double>) {
        // float backend comparisons carry an absolute tolerance
        equal = te.arity() == tc.arity();
        for (size_t i = 0; equal && i < te.entries().size(); ++i)
          equal = std::abs(te.entries()[i] - tc.entries()[i]) <= 1e-9;
      } else {
        equal = te == tc;
      }
      std::cout << "  [" << field_name << "] agreement: " << (equal ? "equal" : "DIFFER")
                << "\n";
    }
  };
  if (sh.field == "f64")
    bench_field(td::to_f64(env), "f64");
  else
    bench_field(env, "rat");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"trace diagram evaluation engine"};
  app.require_subcommand(1);
  Shared sh;
  app.add_option("--dim", sh.dim, "vector space dimension")->capture_default_str();
  app.add_option("--seed", sh.seed, "random seed")->capture_default_str();
  app.add_option("--trials", sh.trials, "randomized trials")->capture_default_str();
  app.add_option("--field", sh.field, "scalar backend: rat|f64")->capture_default_str();
  app.add_option("--evaluator", sh.evaluator, "enum|contract")->capture_default_str();
  app.add_flag("--json", sh.json, "JSON tensor output");
  app.add_flag("--regen-golden", sh.regen_golden, "rewrite golden files");
  app.add_option("--golden-dir", sh.golden_dir, "golden file directory");
  app.add_option("--workers", sh.workers, "worker threads")->capture_default_str();

  std::string file, target, lhs, rhs, builtin, strategy = "random", out_path, mode = "both";
  std::vector<std::string> slots, ladder_names;
  bool open_ladder = false, do_fingerprint = false;

  CLI::App* eval = app.add_subcommand("eval", "evaluate a diagram or expression");
  eval->add_option("file", file, "input .td file");
  eval->add_option("--target", target, "diagram/expr name or builtin target")->required();

  CLI::App* verify = app.add_subcommand("verify", "check an identity");
  verify->add_option("file", file, "input .td file");
  verify->add_option("--builtin", builtin, "built-in identity name");
  verify->add_option("--lhs", lhs, "left side name");
  verify->add_option("--rhs", rhs, "right side name");
  verify->add_option("--strategy", strategy, "basis|random")->capture_default_str();
  verify->add_option("--slots", slots, "vector slots for basis exhaustion")->delimiter(',');

  CLI::App* suite = app.add_subcommand("suite", "run the built-in identity suite");

  CLI::App* expand = app.add_subcommand("expand", "binor-expand a dim-2 ladder");
  expand->add_option("--ladder", ladder_names, "matrix names, topmost first")
      ->delimiter(',')
      ->required();
  expand->add_flag("--open", open_ladder, "leave the ladder unclosed");
  expand->add_flag("--fingerprint", do_fingerprint, "print the extracted trace identity");

  CLI::App* render = app.add_subcommand("render", "emit a dot-format drawing");
  render->add_option("file", file, "input .td file");
  render->add_option("--target", target, "diagram name or builtin target")->required();
  render->add_option("-o,--output", out_path, "output path (default stdout)");

  CLI::App* bench = app.add_subcommand("bench", "time the evaluators");
  bench->add_option("--target", target, "builtin target")->required();
  bench->add_option("--mode", mode, "both|enum|contract")->capture_default_str();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (eval->parsed()) return cmd_eval(sh, file, target);
    if (verify->parsed()) return cmd_verify(sh, file, builtin, lhs, rhs, strategy, slots);
    if (suite->parsed()) return cmd_suite(sh);
    if (expand->parsed()) return cmd_expand(sh, ladder_names, open_ladder, do_fingerprint);
    if (render->parsed()) return cmd_render(sh, file, target, out_path);
    if (bench->parsed()) return cmd_bench(sh, target, mode);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const td::dsl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const td::BindingError& e) {
    std::cerr << "binding error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
