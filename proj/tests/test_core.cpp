#include <gtest/gtest.h>

#include "td/catalog.hpp"
#include "td/evaluate.hpp"
#include "td/expression.hpp"
#include "td/graph.hpp"
#include "td/oracles.hpp"

using namespace td;

namespace {

Environment<Rational> env3() {
  Environment<Rational> env(3);
  env.bind_vector("u", {Rational(1), Rational(2), Rational(3)});
  env.bind_vector("v", {Rational(4), Rational(5), Rational(6)});
  return env;
}

}  // namespace

TEST(Validate, SmallestLegalDiagram) {
  GraphBuilder b(3);
  b.connect(vin("u", 1), vin("v", 2));
  ValidationReport rep = validate(b.peek());
  EXPECT_TRUE(rep.ok);
  EXPECT_TRUE(rep.faults.empty());
}

TEST(Validate, DegreeMismatch) {
  // a 3-valent node with only two ports attached
  DiagramGraph g;
  g.dim = 3;
  g.node_count = 1;
  Edge e1;
  e1.end1 = port(0, 0);
  e1.end2 = vin("u", 1);
  Edge e2;
  e2.end1 = port(0, 1);
  e2.end2 = vin("v", 2);
  g.edges = {e1, e2};
  ValidationReport rep = validate(g);
  ASSERT_FALSE(rep.ok);
  EXPECT_EQ(rep.faults[0].kind, "degree mismatch");
}

TEST(Validate, BasisLabelOutOfRange) {
  GraphBuilder b(3);
  b.connect(basis(4), vin("u", 1));
  ValidationReport rep = validate(b.peek());
  ASSERT_FALSE(rep.ok);
  EXPECT_EQ(rep.faults[0].kind, "basis label out of range");
}

TEST(Validate, DuplicateOutputSlot) {
  GraphBuilder b(2);
  b.connect(out(1), out(1));
  ValidationReport rep = validate(b.peek());
  ASSERT_FALSE(rep.ok);
  EXPECT_EQ(rep.faults[0].kind, "duplicate output slot");
}

TEST(Validate, Total) {
  // validation never throws, even on garbage
  DiagramGraph g;
  g.dim = 3;
  g.node_count = 2;
  Edge e;
  e.end1 = port(5, 9);
  e.end2 = basis(-1);
  g.edges = {e};
  ValidationReport rep = validate(g);
  EXPECT_FALSE(rep.ok);
}

TEST(DisjointUnion, CircleTimesCircle) {
  DiagramGraph c = at_dim(catalog::trace_word_circle({}), 3);
  DiagramGraph cc = disjoint_union(c, c);
  Environment<Rational> env(3);
  EXPECT_EQ(evaluate_enumerative(cc, env).value(), Rational(9));
}

TEST(DisjointUnion, CircleTimesDot) {
  DiagramGraph c = at_dim(catalog::trace_word_circle({}), 3);
  DiagramGraph d = at_dim(catalog::dot_diagram("u", "v"), 3);
  Environment<Rational> env(3);
  env.bind_vector("u", {Rational(1), Rational(0), Rational(0)});
  env.bind_vector("v", {Rational(1), Rational(0), Rational(0)});
  EXPECT_EQ(evaluate_enumerative(disjoint_union(c, d), env).value(), Rational(3));
}

TEST(DisjointUnion, EmptyDiagramIsUnit) {
  DiagramGraph empty;
  empty.dim = 3;
  Environment<Rational> env = env3();
  DiagramGraph d = at_dim(catalog::dot_diagram("u", "v"), 3);
  EXPECT_EQ(evaluate_enumerative(disjoint_union(d, empty), env).value(),
            evaluate_enumerative(d, env).value());
  EXPECT_EQ(evaluate_enumerative(empty, env).value(), Rational(1));
}

TEST(DisjointUnion, DimensionMismatch) {
  DiagramGraph a;
  a.dim = 2;
  DiagramGraph b;
  b.dim = 3;
  EXPECT_THROW(disjoint_union(a, b), std::invalid_argument);
}

TEST(DisjointUnion, AssociativeUpToRenumbering) {
  DiagramGraph g1 = catalog::cross_diagram(3, {"u", "v"});
  DiagramGraph g2 = at_dim(catalog::dot_diagram("a", "b"), 3);
  DiagramGraph g3 = at_dim(catalog::trace_word_circle({}), 3);
  DiagramGraph left = disjoint_union(disjoint_union(g1, g2), g3);
  DiagramGraph right = disjoint_union(g1, disjoint_union(g2, g3));
  Environment<Rational> env(3);
  Sampler smp(3, 0);
  for (const char* n : {"u", "v", "a", "b"}) env.bind_vector(n, smp.int_vector(3));
  EXPECT_EQ(evaluate_enumerative(left, env), evaluate_enumerative(right, env));
}

TEST(ShuffleIds, EvaluationInvariant) {
  DiagramGraph g = catalog::det_node(3, "A");
  Environment<Rational> env(3);
  Sampler smp(17, 0);
  env.bind_matrix("A", smp.int_matrix(3));
  Tensor<Rational> base = evaluate_enumerative(g, env);
  for (uint64_t seed = 0; seed < 10; ++seed) {
    DiagramGraph sh = shuffle_ids(g, seed);
    EXPECT_TRUE(validate(sh).ok);
    EXPECT_EQ(evaluate_enumerative(sh, env), base) << "seed " << seed;
  }
}

TEST(ShuffleIds, ComposesToGroupAction) {
  DiagramGraph g = catalog::char_coeff_diagram(3, 2, "A");
  Environment<Rational> env(3);
  Sampler smp(18, 0);
  env.bind_matrix("A", smp.int_matrix(3));
  Tensor<Rational> base = evaluate_enumerative(g, env);
  DiagramGraph s = shuffle_ids(shuffle_ids(g, 5), 6);
  EXPECT_EQ(evaluate_enumerative(s, env), base);
}

TEST(ShuffleIds, MarkedEdgeFlipKeepsValue) {
  // flipping end1/end2 swaps the matrix index roles but not the value
  GraphBuilder b(2);
  int e = b.connect(basis(1), basis(2));
  b.mark(e, "A");
  DiagramGraph g = b.peek();
  Environment<Rational> env(2);
  Sampler smp(19, 0);
  env.bind_matrix("A", smp.int_matrix(2));
  Rational v = evaluate_enumerative(g, env).value();
  bool saw_flip = false;
  for (uint64_t seed = 0; seed < 8; ++seed) {
    DiagramGraph sh = shuffle_ids(g, seed);
    if (!(sh == g)) saw_flip = true;
    EXPECT_EQ(evaluate_enumerative(sh, env).value(), v);
  }
  EXPECT_TRUE(saw_flip);
}

TEST(RotateCiliation, OddDimensionInvariant) {
  DiagramGraph g = catalog::vector_det_node(3, {"u", "v", "w"});
  Environment<Rational> env(3);
  Sampler smp(20, 0);
  for (const char* n : {"u", "v", "w"}) env.bind_vector(n, smp.int_vector(3));
  Tensor<Rational> base = evaluate_enumerative(g, env);
  EXPECT_EQ(evaluate_enumerative(rotate_ciliation(g, 0, 1), env), base);
}

TEST(RotateCiliation, EvenDimensionFlipsSign) {
  DiagramGraph g = catalog::vector_det_node(2, {"u", "v"});
  Environment<Rational> env(2);
  env.bind_vector("u", {Rational(3), Rational(5)});
  env.bind_vector("v", {Rational(-2), Rational(7)});
  Rational base = evaluate_enumerative(g, env).value();
  Rational rotated = evaluate_enumerative(rotate_ciliation(g, 0, 1), env).value();
  EXPECT_EQ(rotated, -base);
}

TEST(RotateCiliation, FourStepsTwoAtATime) {
  DiagramGraph g = catalog::det_node(4, "A");
  Environment<Rational> env(4);
  Sampler smp(21, 0);
  env.bind_matrix("A", smp.int_matrix(4));
  Rational base = evaluate_contracted(g, env).value();
  EXPECT_EQ(evaluate_contracted(rotate_ciliation(g, 0, 2), env).value(), base);
  EXPECT_EQ(evaluate_contracted(rotate_ciliation(g, 0, 4), env).value(), base);
  EXPECT_EQ(evaluate_contracted(rotate_ciliation(g, 0, 1), env).value(), -base);
}

TEST(RotateCiliation, EitherNodeOfTwo) {
  DiagramGraph g = catalog::char_coeff_diagram(2, 1, "A");
  Environment<Rational> env(2);
  Sampler smp(22, 0);
  env.bind_matrix("A", smp.int_matrix(2));
  Rational base = evaluate_contracted(g, env).value();
  for (int node : {0, 1}) {
    EXPECT_EQ(evaluate_contracted(rotate_ciliation(g, node, 1), env).value(), -base);
    EXPECT_EQ(evaluate_contracted(rotate_ciliation(g, node, 2), env).value(), base);
  }
}

TEST(RotateCiliation, UnknownNode) {
  DiagramGraph g = catalog::det_node(2, "A");
  EXPECT_THROW(rotate_ciliation(g, 3, 1), std::invalid_argument);
}

TEST(Canonical, ShuffleNormalizes) {
  DiagramGraph g = catalog::char_coeff_diagram(3, 2, "A");
  for (uint64_t seed = 1; seed <= 6; ++seed)
    EXPECT_TRUE(canonical_equal(g, shuffle_ids(g, seed))) << "seed " << seed;
}

TEST(Canonical, MultipleLoopsAndAnchoredParts) {
  // loops at late edge indices travel through the component-sorting path
  GraphBuilder b(2);
  int e = b.connect(vin("u", 1), out(1));
  b.mark(e, "A");
  int l1 = b.add_loop();
  b.mark(l1, "B", false);
  int l2 = b.add_loop();
  b.mark(l2, "C", false);
  b.add_loop();
  DiagramGraph g = b.build();
  for (uint64_t seed = 0; seed < 12; ++seed)
    EXPECT_TRUE(canonical_equal(g, shuffle_ids(g, seed))) << seed;
  // loop order is content-based, not insertion-based
  GraphBuilder b2(2);
  b2.add_loop();
  int m2 = b2.connect(vin("u", 1), out(1));
  b2.mark(m2, "A");
  int l4 = b2.add_loop();
  b2.mark(l4, "C", false);
  int l5 = b2.add_loop();
  b2.mark(l5, "B", false);
  EXPECT_TRUE(canonical_equal(g, b2.build()));
}

TEST(Canonical, EqualBasisLabelsAreOrderFree) {
  // two basis terminals with the same label must canonicalize identically
  // regardless of edge insertion order
  GraphBuilder b(3);
  int nd = b.add_node();
  int e0 = b.connect(port(nd, 0), basis(2));
  b.mark(e0, "A");
  b.connect(port(nd, 1), basis(2));
  b.connect(port(nd, 2), basis(1));
  DiagramGraph g = b.build();
  for (uint64_t seed = 0; seed < 12; ++seed)
    EXPECT_TRUE(canonical_equal(g, shuffle_ids(g, seed))) << seed;
}

TEST(Canonical, DistinguishesDifferentDiagrams) {
  EXPECT_FALSE(canonical_equal(catalog::det_node(2, "A"), catalog::det_node(2, "B")));
  EXPECT_FALSE(canonical_equal(catalog::char_coeff_diagram(3, 1, "A"),
                               catalog::char_coeff_diagram(3, 2, "A")));
}

TEST(Expression, CollectMergesShuffledDuplicates) {
  DiagramGraph g = catalog::det_node(3, "A");
  DiagramExpression e;
  e.add_term(Rational(2), g);
  e.add_term(Rational(-2), shuffle_ids(g, 9));
  DiagramExpression collected = collect_terms(e);
  EXPECT_TRUE(collected.terms.empty());
}

TEST(Expression, ZeroExpressionEvaluates) {
  Environment<Rational> env(3);
  Tensor<Rational> t = evaluate_expression(DiagramExpression::zero(3, 2), env);
  EXPECT_EQ(t.arity(), 2);
  for (const auto& v : t.entries()) EXPECT_EQ(v, Rational(0));
}

TEST(Expression, MixedArityRejected) {
  DiagramExpression e;
  e.add_term(Rational(1), catalog::cross_diagram(3, {"u", "v"}));
  EXPECT_THROW(e.add_term(Rational(1), at_dim(catalog::dot_diagram("u", "v"), 3)),
               std::invalid_argument);
}

TEST(AtDim, RejectsNodesAndBigLabels) {
  EXPECT_THROW(at_dim(catalog::det_node(3, "A"), 4), std::invalid_argument);
  EXPECT_THROW(at_dim(catalog::matrix_entry_strand("A", 3, 1), 2), std::invalid_argument);
}
