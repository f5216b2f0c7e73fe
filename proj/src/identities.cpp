#include "td/identities.hpp"

#include <chrono>
#include <sstream>
#include <thread>

#include "td/evaluate.hpp"
#include "td/wiring.hpp"

namespace td::identities {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string describe_env(const Environment<Rational>& env) {
  std::ostringstream os;
  for (const auto& [name, m] : env.matrices) {
    os << name << "=[";
    for (size_t r = 0; r < m.size(); ++r) {
      os << (r ? ";" : "");
      for (size_t c = 0; c < m[r].size(); ++c) os << (c ? "," : "") << to_string(m[r][c]);
    }
    os << "] ";
  }
  for (const auto& [name, v] : env.vectors) {
    os << name << "=(";
    for (size_t c = 0; c < v.size(); ++c) os << (c ? "," : "") << to_string(v[c]);
    os << ") ";
  }
  return os.str();
}

bool tensors_equal(const Tensor<Rational>& a, const Tensor<Rational>& b) {
  return a.entries() == b.entries() && a.arity() == b.arity();
}

}  // namespace

IdentityReport verify_on_basis(const std::string& name, const DiagramExpression& lhs,
                               const DiagramExpression& rhs,
                               const std::vector<std::string>& vector_slots,
                               const Environment<Rational>& env0) {
  if (lhs.arity != rhs.arity)
    throw std::invalid_argument("verify_on_basis: arity mismatch for " + name);
  auto t0 = Clock::now();
  IdentityReport rep;
  rep.name = name;
  rep.strategy = "basis-exhaustion";
  rep.holds = true;
  const int n = env0.dim;
  const int slots = static_cast<int>(vector_slots.size());

  std::vector<int> tuple(slots, 1);
  while (true) {
    Environment<Rational> env = env0;
    for (int s = 0; s < slots; ++s)
      env.bind_vector(vector_slots[s], basis_vector<Rational>(n, tuple[s]));
    ++rep.trials;
    Tensor<Rational> lv = evaluate_expression(lhs, env, Evaluator::kContracted);
    Tensor<Rational> rv = evaluate_expression(rhs, env, Evaluator::kContracted);
    if (!tensors_equal(lv, rv)) {
      rep.holds = false;
      rep.counterexample = describe_env(env);
      break;
    }
    int i = slots - 1;
    for (; i >= 0; --i) {
      if (tuple[i] < n) {
        ++tuple[i];
        break;
      }
      tuple[i] = 1;
    }
    if (i < 0) break;
  }
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

IdentityReport verify_randomized(
    const std::string& name, const DiagramExpression& lhs, const DiagramExpression& rhs,
    const std::vector<std::string>& matrix_symbols, int trials, uint64_t seed, long lo, long hi,
    const std::vector<std::pair<std::string, std::pair<std::string, std::string>>>&
        product_bindings,
    int workers) {
  if (lhs.arity != rhs.arity)
    throw std::invalid_argument("verify_randomized: arity mismatch for " + name);
  auto t0 = Clock::now();
  IdentityReport rep;
  rep.name = name;
  rep.strategy = "randomized";
  rep.trials = trials;
  rep.seed = seed;

  const int n = lhs.dim > 0 ? lhs.dim : rhs.dim;
  auto make_env = [&](int trial) {
    Environment<Rational> env(n);
    Sampler smp(seed, static_cast<uint64_t>(trial));
    for (const std::string& s : matrix_symbols) env.bind_matrix(s, smp.int_matrix(n, lo, hi));
    for (const auto& [prod, factors] : product_bindings)
      env.bind_matrix(prod, oracle::matmul(env.matrix(factors.first), env.matrix(factors.second)));
    return env;
  };
  auto run_trial = [&](int trial) {
    Environment<Rational> env = make_env(trial);
    Tensor<Rational> lv = evaluate_expression(lhs, env, Evaluator::kContracted);
    Tensor<Rational> rv = evaluate_expression(rhs, env, Evaluator::kContracted);
    return tensors_equal(lv, rv);
  };

  std::vector<uint8_t> ok(trials, 1);
  if (workers > 1 && trials >= 4) {
    int w = std::min(workers, trials);
    std::vector<std::thread> threads;
    for (int t = 0; t < w; ++t)
      threads.emplace_back([&, t] {
        for (int trial = t; trial < trials; trial += w) ok[trial] = run_trial(trial) ? 1 : 0;
      });
    for (auto& th : threads) th.join();
  } else {
    for (int trial = 0; trial < trials; ++trial) ok[trial] = run_trial(trial) ? 1 : 0;
  }
  rep.holds = true;
  for (int trial = 0; trial < trials; ++trial) {
    if (!ok[trial]) {
      rep.holds = false;
      rep.counterexample =
          "trial " + std::to_string(trial) + ": " + describe_env(make_env(trial));
      break;
    }
  }
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

IdentityReport verify_pair(const catalog::IdentityPair& pair, int trials, uint64_t seed) {
  if (pair.strategy == catalog::Strategy::kBasisExhaustion)
    return verify_on_basis(pair.name, pair.lhs, pair.rhs, pair.vector_slots,
                           Environment<Rational>(pair.dim));
  return verify_randomized(pair.name, pair.lhs, pair.rhs, pair.matrix_symbols, trials, seed, -9,
                           9, pair.product_bindings);
}

Rational char_coeff_constant(int n, int k, int trials, uint64_t seed) {
  bool have = false;
  Rational constant(0);
  for (int t = 0; t < trials; ++t) {
    Sampler smp(seed, static_cast<uint64_t>(t));
    oracle::Mat a = smp.int_matrix(n);
    Rational ck = oracle::char_poly_coeffs(a).c[k];
    if (sgn(ck) == 0) continue;
    Environment<Rational> env(n);
    env.bind_matrix("A", a);
    Rational v = evaluate_contracted(catalog::char_coeff_diagram(n, k, "A"), env).value();
    Rational ratio = v / ck;
    if (!have) {
      constant = ratio;
      have = true;
    } else if (ratio != constant) {
      throw std::runtime_error("char_coeff_constant: ratio not constant at n=" +
                               std::to_string(n) + " k=" + std::to_string(k) + " (" +
                               to_string(constant) + " vs " + to_string(ratio) + ")");
    }
  }
  if (!have)
    throw std::runtime_error("char_coeff_constant: all samples degenerate at n=" +
                             std::to_string(n) + " k=" + std::to_string(k));
  return constant;
}

std::map<std::pair<int, int>, Rational> measure_char_coeff_constants(int trials, uint64_t seed) {
  std::map<std::pair<int, int>, Rational> out;
  for (int n = 2; n <= 4; ++n)
    for (int k = 0; k <= n; ++k) out[{n, k}] = char_coeff_constant(n, k, trials, seed);
  return out;
}

std::string char_coeff_constants_to_text(const std::map<std::pair<int, int>, Rational>& m) {
  std::ostringstream os;
  for (const auto& [nk, c] : m) os << nk.first << " " << nk.second << " " << to_string(c) << "\n";
  return os.str();
}

PfaffianExperiment pfaffian_experiment(int n, int trials, uint64_t seed,
                                       const std::vector<std::pair<int, int>>& pairing) {
  if (n % 2 != 0 || n > 4)
    throw std::invalid_argument("pfaffian_experiment: n must be even and at most 4");
  PfaffianExperiment ex;
  ex.n = n;
  DiagramGraph cand = catalog::pfaffian_candidate(n, "A", pairing);
  bool have = false;
  bool consistent = true;
  for (int t = 0; t < trials; ++t) {
    Sampler smp(seed, static_cast<uint64_t>(t));
    oracle::Mat a = smp.int_matrix(n);
    Environment<Rational> env(n);
    env.bind_matrix("A", a);
    Rational v = evaluate_contracted(cand, env).value();
    oracle::Mat at = oracle::transpose(a);
    oracle::Mat diff(n, oracle::Vec(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) diff[i][j] = a[i][j] - at[i][j];
    Rational pf = oracle::pfaffian(diff);
    ++ex.samples;
    if (sgn(pf) == 0) {
      if (sgn(v) != 0) consistent = false;  // kappa * 0 must be 0
      ++ex.degenerate;
      continue;
    }
    Rational ratio = v / pf;
    if (!have) {
      ex.kappa = ratio;
      have = true;
    } else if (ratio != ex.kappa) {
      consistent = false;
    }
  }
  ex.fit = have && consistent;
  std::ostringstream os;
  if (ex.fit)
    os << "candidate = " << to_string(ex.kappa) << " * Pf(A - A^T) on " << ex.samples
       << " samples (" << ex.degenerate << " degenerate)";
  else
    os << "no single-constant fit against Pf(A - A^T)";
  ex.notes = os.str();
  return ex;
}

namespace {

// arity-2 strand out(2) -> markings (applied in list order) -> out(1)
DiagramGraph marked_strand(const std::vector<std::string>& applied_in_order) {
  GraphBuilder b(2);
  int e = b.connect(out(2), out(1));
  for (const std::string& m : applied_in_order) b.mark(e, m, /*input_at_end1=*/true);
  return b.build();
}

DiagramGraph circle2(const std::vector<std::string>& word) {
  return at_dim(catalog::trace_word_circle(word), 2);
}

// detnode figure: 2-valent node, both legs marked and run to outputs
DiagramGraph marked_cap_node(const std::string& matrix) {
  GraphBuilder b(2);
  int nd = b.add_node();
  int e1 = b.connect(port(nd, 0), out(1));
  int e2 = b.connect(port(nd, 1), out(2));
  b.mark(e1, matrix, /*input_at_end1=*/false);
  b.mark(e2, matrix, /*input_at_end1=*/false);
  return b.build();
}

DiagramGraph cap_node() {
  GraphBuilder b(2);
  int nd = b.add_node();
  b.connect(port(nd, 0), out(1));
  b.connect(port(nd, 1), out(2));
  return b.build();
}

// strand through two 2-valent ciliated nodes (the cup/cap zigzag)
DiagramGraph zigzag(wiring::CiliumSide cup_side, wiring::CiliumSide cap_side) {
  wiring::WiringTerm t;
  t.bottom_width = 1;
  t.layers.push_back(wiring::Cup{1, cup_side});
  t.layers.push_back(wiring::Cap{0, cap_side});
  return wiring::compile_wiring(t);
}

DiagramGraph plain_strand2() {
  GraphBuilder b(2);
  b.connect(out(1), out(2));
  return b.build();
}

IdentityReport exact_tensor_report(const std::string& name, const DiagramExpression& lhs,
                                   const DiagramExpression& rhs) {
  auto t0 = Clock::now();
  IdentityReport rep;
  rep.name = name;
  rep.strategy = "exact";
  rep.trials = 1;
  Environment<Rational> env(2);
  rep.holds = tensors_equal(evaluate_expression(lhs, env), evaluate_expression(rhs, env));
  if (!rep.holds) rep.counterexample = "constant tensors differ";
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

IdentityReport relation_report(const std::string& name, const fingerprint::TraceRelation& rel,
                               const std::vector<std::string>& symbols, int tuples,
                               uint64_t seed) {
  auto t0 = Clock::now();
  IdentityReport rep;
  rep.name = name;
  rep.strategy = "randomized";
  rep.trials = tuples;
  rep.seed = seed;
  if (!rel.ok()) {
    rep.holds = false;
    rep.counterexample = "extraction failed: " + rel.failure;
    rep.elapsed_seconds = seconds_since(t0);
    return rep;
  }
  rep.holds = true;
  for (int t = 0; t < tuples && rep.holds; ++t) {
    Environment<Rational> env(2);
    Sampler smp(seed, 7000 + static_cast<uint64_t>(t));
    for (const std::string& s : symbols) env.bind_matrix(s, smp.int_matrix(2));
    Rational total(0);
    for (const auto& [mono, c] : rel.zero_form) total += c * mono.eval(env);
    if (sgn(total) != 0) {
      rep.holds = false;
      rep.counterexample = "tuple " + std::to_string(t) + ": " + describe_env(env);
    }
  }
  rep.elapsed_seconds = seconds_since(t0);
  return rep;
}

}  // namespace

fingerprint::TraceRelation tr3_relation(uint64_t seed) {
  return fingerprint::extract_ladder_identity({"A", "B", "C"}, seed);
}

fingerprint::TraceRelation tr4_relation(uint64_t seed) {
  return fingerprint::extract_ladder_identity({"A", "B", "C", "D"}, seed);
}

std::vector<IdentityReport> run_identity_suite(uint64_t seed, int trials, int workers) {
  std::vector<IdentityReport> reports;

  for (const catalog::IdentityPair& p : catalog::identity_suite()) {
    if (p.strategy == catalog::Strategy::kBasisExhaustion) {
      reports.push_back(verify_on_basis(p.name, p.lhs, p.rhs, p.vector_slots,
                                        Environment<Rational>(p.dim)));
    } else {
      reports.push_back(verify_randomized(p.name, p.lhs, p.rhs, p.matrix_symbols, trials, seed,
                                          -9, 9, p.product_bindings, workers));
    }
  }

  {  // det_node, det_permutation_sum and the cofactor oracle agree
    for (int n : {2, 3, 4}) {
      auto t0 = Clock::now();
      IdentityReport rep;
      rep.name = "det-builders-agree-" + std::to_string(n);
      rep.strategy = "randomized";
      rep.trials = trials;
      rep.seed = seed;
      rep.holds = true;
      DiagramGraph dn = catalog::det_node(n, "A");
      DiagramExpression ds = catalog::det_permutation_sum(n, "A");
      for (int t = 0; t < trials && rep.holds; ++t) {
        Sampler smp(seed, 100 + static_cast<uint64_t>(t));
        oracle::Mat a = smp.int_matrix(n);
        Environment<Rational> env(n);
        env.bind_matrix("A", a);
        Rational v1 = evaluate_contracted(dn, env).value();
        Rational v2 = evaluate_expression(ds, env).value();
        Rational v3 = oracle::det_cofactor(a);
        if (v1 != v2 || v2 != v3) {
          rep.holds = false;
          rep.counterexample = describe_env(env);
        }
      }
      rep.elapsed_seconds = seconds_since(t0);
      reports.push_back(std::move(rep));
    }
  }

  {  // binor identity as a 16-entry tensor equation
    wiring::WiringTerm crossing{2, {wiring::Swap{0}}, false};
    DiagramExpression lhs = DiagramExpression::of(wiring::compile_wiring(crossing));
    DiagramExpression rhs = DiagramExpression::of(wiring::compile_resolved(crossing, {0})) +
                            DiagramExpression::of(wiring::compile_resolved(crossing, {1}));
    reports.push_back(exact_tensor_report("binor-identity", lhs, rhs));
  }

  {  // doubly-ciliated strand signs
    using wiring::CiliumSide;
    DiagramExpression strand = DiagramExpression::of(plain_strand2());
    DiagramExpression same =
        DiagramExpression::of(zigzag(CiliumSide::kFirst, CiliumSide::kFirst));
    DiagramExpression opp =
        DiagramExpression::of(zigzag(CiliumSide::kFirst, CiliumSide::kSecond));
    reports.push_back(exact_tensor_report("cilia-same-side", same, Rational(-1) * strand));
    reports.push_back(exact_tensor_report("cilia-opposite-side", opp, strand));
  }

  {  // detnode: cap with both legs marked = det(A) * cap
    DiagramExpression lhs = DiagramExpression::of(marked_cap_node("A"));
    DiagramExpression rhs =
        DiagramExpression::of(disjoint_union(catalog::det_node(2, "A"), cap_node()));
    reports.push_back(
        verify_randomized("detnode", lhs, rhs, {"A"}, trials, seed, -9, 9, {}, workers));
  }

  {  // Cayley-Hamilton: A^2 - tr(A) A + det(A) I = 0 as an arity-2 tensor
    DiagramExpression lhs =
        DiagramExpression::of(marked_strand({"A", "A"})) -
        DiagramExpression::of(disjoint_union(circle2({"A"}), marked_strand({"A"}))) +
        DiagramExpression::of(disjoint_union(catalog::det_node(2, "A"), plain_strand2()));
    reports.push_back(verify_randomized("cayley-hamilton", lhs,
                                        DiagramExpression::zero(2, 2), {"A"}, trials, seed, -9, 9,
                                        {}, workers));
  }

  {  // ch2tr: tr(A^2) - tr(A)^2 + 2 det(A) = 0
    DiagramExpression lhs =
        DiagramExpression::of(circle2({"A", "A"})) -
        DiagramExpression::of(disjoint_union(circle2({"A"}), circle2({"A"}))) +
        Rational(2) * DiagramExpression::of(catalog::det_node(2, "A"));
    reports.push_back(verify_randomized("ch2tr", lhs, DiagramExpression::zero(2, 0), {"A"},
                                        trials, seed, -9, 9, {}, workers));
  }

  {  // derived det(A+B) = det A + det B + tr(A) tr(B) - tr(AB)
    auto t0 = Clock::now();
    IdentityReport rep;
    rep.name = "det-sum";
    rep.strategy = "randomized";
    rep.trials = trials;
    rep.seed = seed;
    rep.holds = true;
    DiagramExpression rhs =
        DiagramExpression::of(catalog::det_node(2, "A")) +
        DiagramExpression::of(catalog::det_node(2, "B")) +
        DiagramExpression::of(disjoint_union(circle2({"A"}), circle2({"B"}))) -
        DiagramExpression::of(circle2({"A", "B"}));
    for (int t = 0; t < trials && rep.holds; ++t) {
      Sampler smp(seed, 200 + static_cast<uint64_t>(t));
      Environment<Rational> env(2);
      env.bind_matrix("A", smp.int_matrix(2));
      env.bind_matrix("B", smp.int_matrix(2));
      Rational lhs_v = oracle::det_cofactor(oracle::add(env.matrix("A"), env.matrix("B")));
      Rational rhs_v = evaluate_expression(rhs, env).value();
      if (lhs_v != rhs_v) {
        rep.holds = false;
        rep.counterexample = describe_env(env);
      }
    }
    rep.elapsed_seconds = seconds_since(t0);
    reports.push_back(std::move(rep));
  }

  {  // label variant: B A^2 - tr(A) B A + det(A) B = 0
    DiagramExpression lhs =
        DiagramExpression::of(marked_strand({"A", "A", "B"})) -
        DiagramExpression::of(disjoint_union(circle2({"A"}), marked_strand({"A", "B"}))) +
        DiagramExpression::of(disjoint_union(catalog::det_node(2, "A"), marked_strand({"B"})));
    reports.push_back(verify_randomized("label-variant", lhs, DiagramExpression::zero(2, 2),
                                        {"A", "B"}, trials, seed, -9, 9, {}, workers));
  }

  {  // trace is cyclic
    DiagramExpression lhs = DiagramExpression::of(circle2({"A", "B"}));
    DiagramExpression rhs = DiagramExpression::of(circle2({"B", "A"}));
    reports.push_back(verify_randomized("trace-cyclic", lhs, rhs, {"A", "B"}, trials, seed, -9, 9,
                                        {}, workers));
  }

  {  // ladder tautologies and the trace relations
    auto t0 = Clock::now();
    IdentityReport rep;
    rep.name = "tautology-k1";
    rep.strategy = "exact";
    rep.trials = 1;
    fingerprint::TraceRelation r1 = fingerprint::extract_ladder_identity({"A"}, seed);
    rep.holds = r1.ok() && r1.trivial();
    if (!rep.holds) rep.counterexample = r1.printable();
    rep.elapsed_seconds = seconds_since(t0);
    reports.push_back(std::move(rep));

    t0 = Clock::now();
    IdentityReport rep2;
    rep2.name = "tautology-k2";
    rep2.strategy = "exact";
    rep2.trials = 1;
    fingerprint::TraceRelation r2 = fingerprint::extract_ladder_identity({"A", "B"}, seed);
    rep2.holds = r2.ok() && r2.trivial();
    if (!rep2.holds) rep2.counterexample = r2.printable();
    rep2.elapsed_seconds = seconds_since(t0);
    reports.push_back(std::move(rep2));

    reports.push_back(relation_report("tr3", tr3_relation(seed), {"A", "B", "C"}, 100, seed));
    reports.push_back(
        relation_report("tr4", tr4_relation(seed), {"A", "B", "C", "D"}, 100, seed));
  }

  return reports;
}

}  // namespace td::identities
