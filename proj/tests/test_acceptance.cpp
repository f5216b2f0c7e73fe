// Acceptance suite: one test per criterion, each printing a pass/fail
// line. Tolerances are exact (rational backend) unless stated; the whole
// suite is expected to finish well under two minutes.
#include <gtest/gtest.h>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "td/catalog.hpp"
#include "td/dsl.hpp"
#include "td/evaluate.hpp"
#include "td/fingerprint.hpp"
#include "td/identities.hpp"
#include "td/oracles.hpp"
#include "td/segments.hpp"
#include "td/wiring.hpp"

using namespace td;

namespace {

struct Criterion {
  int number;
  std::string text;
  bool passed = false;
  ~Criterion() {
    std::cout << "criterion " << number << (passed ? " PASS" : " FAIL") << " - " << text << "\n";
  }
};

std::string read_golden(const std::string& name) {
  std::ifstream in(std::string(TD_GOLDEN_DIR) + "/" + name);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Environment<Rational> sample_matrix_env(int n, uint64_t seed, uint64_t trial,
                                        const std::vector<std::string>& names = {"A"}) {
  Environment<Rational> env(n);
  Sampler smp(seed, trial);
  for (const std::string& nm : names) env.bind_matrix(nm, smp.int_matrix(n));
  return env;
}

}  // namespace

TEST(Acceptance, C01_CiliationSignExample) {
  Criterion c{1, "node_tensor(4) entry (2,4,1,3) = -1"};
  Tensor<Rational> t = node_tensor<Rational>(4);
  ASSERT_EQ(t.at({2, 4, 1, 3}), Rational(-1));
  ASSERT_EQ(permutation_sign({2, 4, 1, 3}, 4), -1);
  c.passed = true;
}

TEST(Acceptance, C02_CircleValues) {
  Criterion c{2, "bare circle evaluates to n for n = 1..6"};
  for (int n = 1; n <= 6; ++n) {
    Environment<Rational> env(n);
    DiagramGraph circle = at_dim(catalog::trace_word_circle({}), n);
    ASSERT_EQ(evaluate_enumerative(circle, env).value(), Rational(n)) << n;
    ASSERT_EQ(evaluate_contracted(circle, env).value(), Rational(n)) << n;
  }
  c.passed = true;
}

TEST(Acceptance, C03_DeterminantAgreement) {
  Criterion c{3, "det_node, det_permutation_sum and cofactor oracle agree (25 x n=2..4)"};
  for (int n : {2, 3, 4}) {
    DiagramGraph dn = catalog::det_node(n, "A");
    DiagramExpression ds = catalog::det_permutation_sum(n, "A");
    for (uint64_t t = 0; t < 25; ++t) {
      Environment<Rational> env = sample_matrix_env(n, 303, 100 * n + t);
      Rational oracle_det = oracle::det_cofactor(env.matrix("A"));
      ASSERT_EQ(evaluate_contracted(dn, env).value(), oracle_det);
      ASSERT_EQ(evaluate_expression(ds, env).value(), oracle_det);
    }
  }
  // n = 2 spot check of the closed form a11 a22 - a12 a21
  for (uint64_t t = 0; t < 5; ++t) {
    Environment<Rational> env = sample_matrix_env(2, 304, t);
    const auto& a = env.matrix("A");
    ASSERT_EQ(evaluate_contracted(catalog::det_node(2, "A"), env).value(),
              a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  }
  c.passed = true;
}

TEST(Acceptance, C04_VectorIdentitySuite) {
  Criterion c{4, "quad-cross, bac-cab and four-way triple chain hold by basis exhaustion"};
  Environment<Rational> env0(3);
  for (const char* name : {"quad-cross", "bac-cab"}) {
    const catalog::IdentityPair& p = catalog::find_identity(name);
    auto rep = identities::verify_on_basis(p.name, p.lhs, p.rhs, p.vector_slots, env0);
    ASSERT_TRUE(rep.holds) << name << ": " << rep.counterexample;
    ASSERT_EQ(rep.trials, name == std::string("quad-cross") ? 81 : 27);
  }
  auto forms = catalog::triple_chain_forms();
  for (size_t i = 0; i < forms.size(); ++i)
    for (size_t j = i + 1; j < forms.size(); ++j) {
      auto rep = identities::verify_on_basis(
          "chain", DiagramExpression::of(forms[i]), DiagramExpression::of(forms[j]),
          {"u", "v", "w"}, env0);
      ASSERT_TRUE(rep.holds) << i << " vs " << j;
    }
  c.passed = true;
}

TEST(Acceptance, C05_CrossProductComponents) {
  Criterion c{5, "cross diagram reproduces the component formula on basis and random pairs"};
  DiagramGraph g = catalog::cross_diagram(3, {"u", "v"});
  auto check = [&](const oracle::Vec& u, const oracle::Vec& v) {
    Environment<Rational> env(3);
    env.bind_vector("u", u);
    env.bind_vector("v", v);
    Tensor<Rational> t = evaluate_contracted(g, env);
    ASSERT_EQ(t.at({1}), u[1] * v[2] - u[2] * v[1]);
    ASSERT_EQ(t.at({2}), u[2] * v[0] - u[0] * v[2]);
    ASSERT_EQ(t.at({3}), u[0] * v[1] - u[1] * v[0]);
  };
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      check(basis_vector<Rational>(3, i), basis_vector<Rational>(3, j));
  for (uint64_t t = 0; t < 10; ++t) {
    Sampler smp(305, t);
    check(smp.int_vector(3), smp.int_vector(3));
  }
  c.passed = true;
}

TEST(Acceptance, C06_ClosedFullDeterminant) {
  Criterion c{6, "closed all-marked diagram = (-1)^(n/2) n! det(A), n = 2..4, 25 trials"};
  for (int n : {2, 3, 4}) {
    DiagramGraph g = catalog::char_coeff_diagram(n, n, "A");
    long fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    Rational scale(((n / 2) % 2) ? -fact : fact);
    for (uint64_t t = 0; t < 25; ++t) {
      Environment<Rational> env = sample_matrix_env(n, 306, 100 * n + t);
      ASSERT_EQ(evaluate_contracted(g, env).value(),
                scale * oracle::det_cofactor(env.matrix("A")))
          << "n=" << n;
    }
  }
  c.passed = true;
}

TEST(Acceptance, C07_DetFactorsNode) {
  Criterion c{7, "all-marked node = det(A) x unmarked node as an arity-3 tensor, 25 trials"};
  const catalog::IdentityPair& p = catalog::find_identity("det-factors-node");
  auto rep = identities::verify_randomized(p.name, p.lhs, p.rhs, p.matrix_symbols, 25, 307);
  ASSERT_TRUE(rep.holds) << rep.counterexample;
  ASSERT_EQ(Tensor<Rational>::cell_count(3, 3), 27u);
  c.passed = true;
}

TEST(Acceptance, C08_CharacteristicCoefficients) {
  Criterion c{8, "char_coeff_diagram / c_k constant; (2,2) = -2, (3,3) = -6; golden stable"};
  auto t0 = std::chrono::steady_clock::now();
  auto measured = identities::measure_char_coeff_constants(10, 308);
  ASSERT_EQ(measured.at({2, 2}), Rational(-2));
  ASSERT_EQ(measured.at({3, 3}), Rational(-6));
  // constants pinned on first run, stable thereafter
  std::map<std::pair<int, int>, Rational> expectations;
  {
    std::istringstream is(read_golden("char_coeff_constants.txt"));
    int n, k;
    std::string v;
    while (is >> n >> k >> v) expectations[{n, k}] = parse_rational(v);
  }
  ASSERT_EQ(measured, expectations);
  // a different seed measures the same constants
  ASSERT_EQ(identities::measure_char_coeff_constants(10, 309), expectations);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_LT(secs, 20.0);
  c.passed = true;
}

TEST(Acceptance, C09_BinorAndDetnode) {
  Criterion c{9, "binor 16-entry identity, doubly-ciliated signs, detnode (25 trials)"};
  Environment<Rational> env2(2);
  // crossing = parallel + calibrated gadget, all 16 entries
  wiring::WiringTerm crossing{2, {wiring::Swap{0}}, false};
  Tensor<Rational> x = evaluate_contracted(wiring::compile_wiring(crossing), env2);
  Tensor<Rational> p = evaluate_contracted(wiring::compile_resolved(crossing, {0}), env2);
  Tensor<Rational> gd = evaluate_contracted(wiring::compile_resolved(crossing, {1}), env2);
  ASSERT_EQ(x.entries().size(), 16u);
  for (size_t i = 0; i < 16; ++i) ASSERT_EQ(x.entries()[i], p.entries()[i] + gd.entries()[i]);

  auto reports = identities::run_identity_suite(309, 25, 2);
  int seen = 0;
  for (const auto& r : reports) {
    if (r.name == "cilia-same-side" || r.name == "cilia-opposite-side") {
      ++seen;
      ASSERT_TRUE(r.holds) << r.name;
    }
    if (r.name == "detnode") {
      ++seen;
      ASSERT_TRUE(r.holds) << r.counterexample;
      ASSERT_EQ(r.trials, 25);
    }
  }
  ASSERT_EQ(seen, 3);
  c.passed = true;
}

TEST(Acceptance, C10_TraceRelations) {
  Criterion c{10, "n=2 trace relations hold on 100 seeded tuples each"};
  const uint64_t seed = 310;

  // ch2tr, Cayley-Hamilton, det(A+B), label variant, tr(AB) = tr(BA)
  auto reports = identities::run_identity_suite(seed, 100, 4);
  for (const char* name :
       {"ch2tr", "cayley-hamilton", "det-sum", "label-variant", "trace-cyclic", "tr3", "tr4"}) {
    bool found = false;
    for (const auto& r : reports)
      if (r.name == name) {
        found = true;
        ASSERT_TRUE(r.holds) << name << ": " << r.counterexample;
        ASSERT_GE(r.trials, 100) << name;
      }
    ASSERT_TRUE(found) << name;
  }
  // the one-crossing ladder reduces to the tautology 0 = 0
  fingerprint::TraceRelation k1 = fingerprint::extract_ladder_identity({"A"}, seed);
  ASSERT_TRUE(k1.ok());
  ASSERT_TRUE(k1.trivial());
  ASSERT_EQ(k1.printable(), "0 = 0");
  c.passed = true;
}

TEST(Acceptance, C11_BinorExpansion) {
  Criterion c{11, "2^k expansion preserves evaluation; tr3/tr4 vectors match golden"};
  auto t0 = std::chrono::steady_clock::now();
  for (int k = 1; k <= 4; ++k) {
    std::vector<std::string> names;
    for (int i = 0; i < k; ++i) names.emplace_back(1, static_cast<char>('A' + i));
    wiring::WiringTerm lad = wiring::ladder(names);
    DiagramExpression expansion = wiring::binor_expand(lad);
    ASSERT_EQ(expansion.terms.size(), 1u << k);
    DiagramGraph original = wiring::compile_wiring(lad);
    for (uint64_t t = 0; t < 5; ++t) {
      Environment<Rational> env(2);
      Sampler smp(311, 10 * k + t);
      for (const std::string& n : names) env.bind_matrix(n, smp.int_matrix(2));
      ASSERT_EQ(evaluate_expression(expansion, env).value(),
                evaluate_contracted(original, env).value());
    }
  }
  ASSERT_EQ(fingerprint::relation_to_text(identities::tr3_relation(311)), read_golden("tr3.txt"));
  ASSERT_EQ(fingerprint::relation_to_text(identities::tr4_relation(311)), read_golden("tr4.txt"));
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_LT(secs, 30.0);
  c.passed = true;
}

namespace {

// seeded random diagram with at most 8 segments, expressed through the DSL
DiagramGraph random_small_diagram(uint64_t seed) {
  for (uint64_t attempt = 0;; ++attempt) {
    Sampler smp(seed, 7777 + attempt);
    int n = 2 + static_cast<int>(smp.int_in(0, 1));  // dim 2 or 3
    int nodes = static_cast<int>(smp.int_in(0, 2));
    DiagramGraph g;
    g.dim = n;
    g.node_count = nodes;
    std::vector<Attachment> points;
    for (int nd = 0; nd < nodes; ++nd)
      for (int s = 0; s < n; ++s) points.push_back(port(nd, s));
    int vecs = static_cast<int>(smp.int_in(0, 2));
    for (int i = 1; i <= vecs; ++i) points.push_back(vin("v" + std::to_string(i), i));
    int bases = static_cast<int>(smp.int_in(0, 2));
    for (int i = 0; i < bases; ++i)
      points.push_back(basis(1 + static_cast<int>(smp.int_in(0, n - 1))));
    int outs = static_cast<int>(smp.int_in(0, 2));
    for (int i = 1; i <= outs; ++i) points.push_back(out(i));
    if (points.size() % 2 != 0)
      points.push_back(vin("v" + std::to_string(vecs + 1), vecs + 1));
    // random pairing
    std::vector<int> order(points.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    for (int i = static_cast<int>(order.size()) - 1; i > 0; --i)
      std::swap(order[i], order[smp.int_in(0, i)]);
    for (size_t i = 0; i + 1 < order.size(); i += 2) {
      Edge e;
      e.end1 = points[order[i]];
      e.end2 = points[order[i + 1]];
      g.edges.push_back(std::move(e));
    }
    if (smp.int_in(0, 3) == 0) {
      Edge loop;
      loop.closed = true;
      g.edges.push_back(loop);
    }
    int marks = static_cast<int>(smp.int_in(0, 2));
    for (int m = 0; m < marks && !g.edges.empty(); ++m) {
      int e = static_cast<int>(smp.int_in(0, static_cast<int>(g.edges.size()) - 1));
      g.edges[e].markings.push_back(
          {std::string("M") + char('1' + m), smp.int_in(0, 1) == 0});
    }
    if (!validate(g).ok) continue;
    SegmentModel model = build_segments(g);
    if (model.count + model.bare_loops > 8) continue;
    return g;
  }
}

}  // namespace

TEST(Acceptance, C12_EvaluatorEquivalenceAndPerformance) {
  Criterion c{12, "enumerative = contracted on catalog and 50 random DSL diagrams; n=6 guard"};
  // catalog diagrams for n <= 4
  Sampler smp(312, 0);
  for (int n = 2; n <= 4; ++n) {
    Environment<Rational> env(n);
    env.bind_matrix("A", smp.int_matrix(n));
    env.bind_matrix("B", smp.int_matrix(n));
    std::vector<std::string> cross_names;
    for (int i = 1; i < n; ++i) {
      cross_names.push_back("u" + std::to_string(i));
      env.bind_vector(cross_names.back(), smp.int_vector(n));
    }
    std::vector<std::string> det_names;
    for (int i = 1; i <= n; ++i) {
      det_names.push_back("w" + std::to_string(i));
      env.bind_vector(det_names.back(), smp.int_vector(n));
    }
    std::vector<DiagramGraph> graphs = {
        at_dim(catalog::trace_word_circle({}), n),
        at_dim(catalog::trace_word_circle({"A"}), n),
        at_dim(catalog::trace_word_circle({"A", "B"}), n),
        catalog::det_node(n, "A"),
        catalog::cross_diagram(n, cross_names),
        catalog::vector_det_node(n, det_names),
        catalog::char_coeff_diagram(n, n / 2, "A"),
        at_dim(catalog::matrix_entry_strand("A", 1, 2), n),
    };
    if (n % 2 == 0) graphs.push_back(catalog::pfaffian_candidate(n, "A"));
    for (const DiagramGraph& g : graphs)
      ASSERT_EQ(evaluate_enumerative(g, env), evaluate_contracted(g, env)) << "n=" << n;
  }

  // 50 random diagrams, round-tripped through the DSL text format
  for (uint64_t t = 0; t < 50; ++t) {
    DiagramGraph g = random_small_diagram(t);
    dsl::Document doc;
    doc.dim = g.dim;
    doc.diagrams.emplace_back("g", g);
    dsl::Document parsed = dsl::parse(dsl::serialize(doc));
    const DiagramGraph& pg = *parsed.find_diagram("g");
    Environment<Rational> env(g.dim);
    Sampler bind(313, t);
    for (const Edge& e : pg.edges) {
      for (const Marking& m : e.markings)
        if (!env.matrices.count(m.matrix)) env.bind_matrix(m.matrix, bind.int_matrix(g.dim));
      if (e.closed) continue;
      for (const Attachment* a : {&e.end1, &e.end2})
        if (const auto* vi = std::get_if<VectorInput>(a))
          if (!env.vectors.count(vi->name)) env.bind_vector(vi->name, bind.int_vector(g.dim));
    }
    ASSERT_EQ(evaluate_enumerative(pg, env), evaluate_contracted(pg, env)) << "diagram " << t;
  }

  // performance: contracted det-node at n = 6 under 5 s, guard refuses enumerative
  DiagramGraph d6 = catalog::det_node(6, "A");
  ASSERT_GT(enumerative_cost(d6), 1e8);
  Environment<Rational> env6(6);
  env6.bind_matrix("A", smp.int_matrix(6));
  auto t0 = std::chrono::steady_clock::now();
  Rational v = evaluate_contracted(d6, env6).value();
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  ASSERT_LT(secs, 5.0);
  ASSERT_EQ(v, oracle::det_cofactor(env6.matrix("A")));
  c.passed = true;
}

TEST(Acceptance, C13_StructuralInvariances) {
  Criterion c{13, "shuffle_ids invariance; ciliation rotation signs on 20 seeded cases"};
  for (uint64_t t = 0; t < 20; ++t) {
    Sampler smp(314, t);
    int n = 2 + static_cast<int>(t % 3);  // 2, 3, 4
    Environment<Rational> env(n);
    env.bind_matrix("A", smp.int_matrix(n));
    DiagramGraph g = t % 2 == 0 ? catalog::det_node(n, "A")
                                : catalog::char_coeff_diagram(n, n / 2, "A");
    Tensor<Rational> base = evaluate_contracted(g, env);
    ASSERT_EQ(evaluate_contracted(shuffle_ids(g, t), env), base) << "case " << t;

    Tensor<Rational> rotated = evaluate_contracted(rotate_ciliation(g, 0, 1), env);
    if (n % 2 == 1) {
      ASSERT_EQ(rotated, base) << "odd n invariance, case " << t;
    } else {
      Tensor<Rational> negated = base;
      for (auto& e : negated.entries()) e = -e;
      ASSERT_EQ(rotated, negated) << "even n sign flip, case " << t;
    }
    // n-step rotation is always the identity
    ASSERT_EQ(evaluate_contracted(rotate_ciliation(g, 0, n), env), base);
  }
  c.passed = true;
}

TEST(Acceptance, C14_DslRoundTrip) {
  Criterion c{14, "parse/serialize fixed point; Figure-1 document evaluates to det(A)"};
  std::vector<std::pair<std::string, DiagramGraph>> cases = {
      {"dot", at_dim(catalog::dot_diagram("u", "v"), 3)},
      {"cross", catalog::cross_diagram(3, {"u", "v"})},
      {"vdet", catalog::vector_det_node(3, {"u", "v", "w"})},
      {"det2", catalog::det_node(2, "A")},
      {"det3", catalog::det_node(3, "A")},
      {"det4", catalog::det_node(4, "A")},
      {"circle", at_dim(catalog::trace_word_circle({}), 3)},
      {"word", at_dim(catalog::trace_word_circle({"A", "B"}), 4)},
      {"charc", catalog::char_coeff_diagram(3, 2, "A")},
      {"charc4", catalog::char_coeff_diagram(4, 2, "A")},
      {"pfaff", catalog::pfaffian_candidate(4, "A")},
      {"entry", at_dim(catalog::matrix_entry_strand("A", 2, 1), 3)},
  };
  for (const auto& [name, g] : cases) {
    dsl::Document doc;
    doc.dim = g.dim;
    doc.diagrams.emplace_back(name, g);
    std::string text = dsl::serialize(doc);
    dsl::Document back = dsl::parse(text);
    ASSERT_TRUE(canonical_equal(*back.find_diagram(name), g)) << name;
    ASSERT_EQ(dsl::serialize(back), text) << name;  // fixed point
    // evaluation invariance
    Environment<Rational> env(g.dim);
    Sampler smp(315, 1);
    for (const char* m : {"A", "B"}) env.bind_matrix(m, smp.int_matrix(g.dim));
    for (const char* v : {"u", "v", "w"}) env.bind_vector(v, smp.int_vector(g.dim));
    ASSERT_EQ(evaluate_contracted(*back.find_diagram(name), env), evaluate_contracted(g, env))
        << name;
  }

  const char* figure1 = R"(
dim 3
matrix A = [[2, 0, 1], [1, 3, -1], [0, 5, 4]]
diagram det {
  node v(e1, e2, e3)
  basis 1 -> e1
  basis 2 -> e2
  basis 3 -> e3
  mark A on e1 dir rev
  mark A on e2 dir rev
  mark A on e3 dir rev
}
)";
  dsl::Document doc = dsl::parse(figure1);
  Environment<Rational> env = doc.environment();
  ASSERT_EQ(evaluate_contracted(*doc.find_diagram("det"), env).value(),
            oracle::det_cofactor(env.matrix("A")));
  c.passed = true;
}

TEST(Acceptance, C15_PfaffianExperiment) {
  Criterion c{15, "n=2 candidate = Pf(A - A^T) on 20 samples; n=4 report; Pf^2 = det"};
  auto e2 = identities::pfaffian_experiment(2, 20, 316);
  ASSERT_TRUE(e2.fit);
  ASSERT_EQ(e2.kappa, Rational(1));
  ASSERT_EQ(e2.samples, 20);

  auto e4 = identities::pfaffian_experiment(4, 12, 316);
  ASSERT_FALSE(e4.notes.empty());  // report emitted; no equality asserted

  for (int n : {2, 4, 6}) {
    for (uint64_t t = 0; t < 4; ++t) {
      Sampler smp(317, 10 * n + t);
      oracle::Mat a = smp.int_matrix(n);
      oracle::Mat m(n, oracle::Vec(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m[i][j] = a[i][j] - a[j][i];
      Rational pf = oracle::pfaffian(m);
      ASSERT_EQ(pf * pf, oracle::det_cofactor(m)) << "n=" << n;
    }
  }
  c.passed = true;
}
