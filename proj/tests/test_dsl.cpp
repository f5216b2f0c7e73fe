#include <gtest/gtest.h>

#include "td/catalog.hpp"
#include "td/dsl.hpp"
#include "td/evaluate.hpp"
#include "td/oracles.hpp"

using namespace td;

namespace {

const char* kDotDoc = R"(
# the dot product diagram
dim 3
vector u = [1, 2, 3]
vector v = [4, 5, 6]
diagram dot {
  input u -> e
  input v -> e
}
)";

const char* kFigureOneDoc = R"(
dim 3
matrix A = [[1, 2, 3], [4, 5, 6], [7, 8, 10]]
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

}  // namespace

TEST(Parse, DotDocumentMatchesCatalog) {
  dsl::Document doc = dsl::parse(kDotDoc);
  ASSERT_EQ(doc.diagrams.size(), 1u);
  Environment<Rational> env = doc.environment();
  Rational v = evaluate_contracted(*doc.find_diagram("dot"), env).value();
  EXPECT_EQ(v, Rational(32));
  DiagramGraph cat = at_dim(catalog::dot_diagram("u", "v"), 3);
  EXPECT_TRUE(canonical_equal(*doc.find_diagram("dot"), cat));
}

TEST(Parse, FigureOneEvaluatesToDet) {
  dsl::Document doc = dsl::parse(kFigureOneDoc);
  Environment<Rational> env = doc.environment();
  EXPECT_EQ(evaluate_contracted(*doc.find_diagram("det"), env).value(), Rational(-3));
  EXPECT_TRUE(canonical_equal(*doc.find_diagram("det"), catalog::det_node(3, "A")));
}

TEST(Parse, EdgeUsedThreeTimes) {
  const char* doc = R"(
dim 3
diagram bad {
  input u -> e
  input v -> e
  input w -> e
}
)";
  try {
    dsl::parse(doc);
    FAIL() << "expected ParseError";
  } catch (const dsl::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("more than twice"), std::string::npos);
    EXPECT_GT(e.line, 1);
  }
}

TEST(Parse, DuplicateOutputSlot) {
  const char* doc = R"(
dim 2
diagram bad {
  output 1 -> a
  output 1 -> b
  input u -> a
  input v -> b
}
)";
  EXPECT_THROW(dsl::parse(doc), dsl::ParseError);
}

TEST(Parse, UnknownNameInExpr) {
  const char* doc = R"(
dim 2
diagram d { loop c }
expr e = 2 * d + missing
)";
  EXPECT_THROW(dsl::parse(doc), dsl::ParseError);
}

TEST(Parse, ErrorsCarryPosition) {
  try {
    dsl::parse("dim x");
    FAIL();
  } catch (const dsl::ParseError& e) {
    EXPECT_EQ(e.line, 1);
    EXPECT_GE(e.col, 5);
  }
}

TEST(Parse, ExactlyOneDim) {
  EXPECT_THROW(dsl::parse("dim 2\ndim 3\n"), dsl::ParseError);
  EXPECT_THROW(dsl::parse("vector u = [1, 2]\n"), dsl::ParseError);  // no dim at all
  EXPECT_THROW(dsl::parse("diagram d { loop c }\n"), dsl::ParseError);
}

TEST(Parse, SingleUseEdgeRejected) {
  EXPECT_THROW(dsl::parse("dim 2\ndiagram d { input u -> e }\n"), dsl::ParseError);
}

TEST(Parse, DuplicateNamesRejected) {
  EXPECT_THROW(dsl::parse("dim 2\nmatrix A = [[1,0],[0,1]]\nvector A = [1, 2]\n"),
               dsl::ParseError);
}

TEST(Parse, RationalScalars) {
  const char* doc = R"(
dim 2
matrix A = [[1/3, -2/6], [0, 5]]
vector u = [1/2, -7]
)";
  dsl::Document d = dsl::parse(doc);
  EXPECT_EQ(d.matrices[0].second[0][0], rat(1, 3));
  EXPECT_EQ(d.matrices[0].second[0][1], rat(-1, 3));
  EXPECT_EQ(d.vectors[0].second[0], rat(1, 2));
}

TEST(Parse, LoopAndExprArithmetic) {
  const char* doc = R"(
dim 3
matrix A = [[1,0,0],[0,1,0],[0,0,2]]
diagram circ {
  loop e
  mark A on e dir fwd
}
diagram bare { loop f }
expr twice = 2 * circ - bare
)";
  dsl::Document d = dsl::parse(doc);
  Environment<Rational> env = d.environment();
  EXPECT_EQ(evaluate_expression(d.materialize("twice"), env).value(),
            Rational(2 * 4 - 3));
}

TEST(Serialize, RoundTripCatalog) {
  std::vector<std::pair<std::string, DiagramGraph>> cases = {
      {"dot", at_dim(catalog::dot_diagram("u", "v"), 3)},
      {"cross", catalog::cross_diagram(3, {"u", "v"})},
      {"det3", catalog::det_node(3, "A")},
      {"det4", catalog::det_node(4, "A")},
      {"vdet", catalog::vector_det_node(3, {"u", "v", "w"})},
      {"charc", catalog::char_coeff_diagram(4, 2, "A")},
      {"pfaff", catalog::pfaffian_candidate(4, "A")},
      {"circle", at_dim(catalog::trace_word_circle({}), 3)},
      {"word", at_dim(catalog::trace_word_circle({"A", "B"}), 3)},
      {"entry", at_dim(catalog::matrix_entry_strand("A", 1, 2), 3)},
  };
  for (const auto& [name, g] : cases) {
    dsl::Document doc;
    doc.dim = g.dim;
    doc.diagrams.emplace_back(name, g);
    std::string text = dsl::serialize(doc);
    dsl::Document back = dsl::parse(text);
    ASSERT_NE(back.find_diagram(name), nullptr) << name;
    EXPECT_TRUE(canonical_equal(*back.find_diagram(name), g)) << name << "\n" << text;
    // fixed point after one cycle
    EXPECT_EQ(dsl::serialize(back), text) << name;
  }
}

TEST(Serialize, PreservesRationalsExactly) {
  dsl::Document doc;
  doc.dim = 2;
  doc.matrices.emplace_back("A", oracle::Mat{{rat(1, 3), rat(-2, 3)}, {rat(0), rat(7)}});
  std::string text = dsl::serialize(doc);
  EXPECT_NE(text.find("1/3"), std::string::npos);
  EXPECT_NE(text.find("-2/3"), std::string::npos);
  dsl::Document back = dsl::parse(text);
  EXPECT_EQ(back.matrices[0].second, doc.matrices[0].second);
}

TEST(Serialize, DoublyMarkedEdgeKeepsOrder) {
  GraphBuilder b(2);
  int e = b.connect(out(2), out(1));
  b.mark(e, "B");
  b.mark(e, "A");
  DiagramGraph g = b.peek();
  dsl::Document doc;
  doc.dim = 2;
  doc.diagrams.emplace_back("s", g);
  dsl::Document back = dsl::parse(dsl::serialize(doc));
  Sampler smp(70, 0);
  Environment<Rational> env(2);
  env.bind_matrix("A", smp.int_matrix(2));
  env.bind_matrix("B", smp.int_matrix(2));
  EXPECT_EQ(evaluate_contracted(*back.find_diagram("s"), env),
            evaluate_contracted(g, env));
}

TEST(ToDot, ShapeCounts) {
  auto count = [](const std::string& text, const std::string& needle) {
    size_t n = 0, pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
      ++n;
      pos += needle.size();
    }
    return n;
  };
  std::string dot = dsl::to_dot(at_dim(catalog::dot_diagram("u", "v"), 3));
  EXPECT_EQ(count(dot, "shape=box"), 2u);
  EXPECT_EQ(count(dot, " -> "), 1u);

  std::string cross = dsl::to_dot(catalog::cross_diagram(3, {"u", "v"}));
  EXPECT_EQ(count(cross, "shape=circle"), 1u);
  EXPECT_EQ(count(cross, " -> "), 3u);
  EXPECT_NE(cross.find("cilium"), std::string::npos);

  std::string det = dsl::to_dot(catalog::det_node(3, "A"));
  EXPECT_EQ(count(det, "shape=cds"), 3u);
  EXPECT_EQ(count(det, "label=\"e1\""), 1u);

  // deterministic across runs and shuffles
  EXPECT_EQ(dsl::to_dot(catalog::det_node(3, "A")),
            dsl::to_dot(shuffle_ids(catalog::det_node(3, "A"), 4)));
}

TEST(TensorJson, ScalarAndVectorForms) {
  Tensor<Rational> s = Tensor<Rational>::scalar(3, Rational(3));
  EXPECT_EQ(dsl::tensor_to_json(s),
            "{\"dim\":3,\"arity\":0,\"entries\":[{\"index\":[],\"value\":\"3\"}]}");

  Tensor<Rational> e3(3, 1);
  e3.at({3}) = Rational(1);
  EXPECT_EQ(dsl::tensor_to_json(e3),
            "{\"dim\":3,\"arity\":1,\"entries\":[{\"index\":[1],\"value\":\"0\"},"
            "{\"index\":[2],\"value\":\"0\"},{\"index\":[3],\"value\":\"1\"}]}");

  Tensor<Rational> q = Tensor<Rational>::scalar(2, rat(-2, 3));
  EXPECT_NE(dsl::tensor_to_json(q).find("\"-2/3\""), std::string::npos);
}
