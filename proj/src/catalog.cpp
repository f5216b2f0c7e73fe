#include "td/catalog.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace td::catalog {

DiagramGraph dot_diagram(const std::string& u, const std::string& v) {
  // node-free, so dimension-generic; retarget with at_dim
  GraphBuilder b(3);
  b.connect(vin(u, 1), vin(v, 2));
  return b.build();
}

DiagramGraph cross_diagram(int n, const std::vector<std::string>& vectors) {
  if (static_cast<int>(vectors.size()) != n - 1)
    throw std::invalid_argument("cross_diagram expects n-1 vector names");
  GraphBuilder b(n);
  int nd = b.add_node();
  for (int s = 0; s < n - 1; ++s) b.connect(port(nd, s), vin(vectors[s], s + 1));
  b.connect(port(nd, n - 1), out(1));
  return b.build();
}

DiagramGraph vector_det_node(int n, const std::vector<std::string>& vectors) {
  if (static_cast<int>(vectors.size()) != n)
    throw std::invalid_argument("vector_det_node expects n vector names");
  GraphBuilder b(n);
  int nd = b.add_node();
  for (int s = 0; s < n; ++s) b.connect(port(nd, s), vin(vectors[s], s + 1));
  return b.build();
}

DiagramGraph det_node(int n, const std::string& matrix) {
  GraphBuilder b(n);
  int nd = b.add_node();
  for (int s = 0; s < n; ++s) {
    int e = b.connect(port(nd, s), basis(s + 1));
    b.mark(e, matrix, /*input_at_end1=*/false);  // basis side feeds the matrix
  }
  return b.build();
}

DiagramExpression det_permutation_sum(int n, const std::string& matrix) {
  if (n < 1 || n > 6) throw std::invalid_argument("det_permutation_sum guarded to n <= 6");
  DiagramExpression expr;
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 1);
  do {
    GraphBuilder b(n);
    for (int k = 0; k < n; ++k) {
      int e = b.connect(basis(k + 1), basis(sigma[k]));
      b.mark(e, matrix, /*input_at_end1=*/true);  // row sigma(k), column k
    }
    int sg = 0;
    {
      int inv = 0;
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (sigma[i] > sigma[j]) ++inv;
      sg = inv % 2 ? -1 : 1;
    }
    expr.add_term(Rational(sg), b.build());
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return expr;
}

DiagramGraph trace_word_circle(const std::vector<std::string>& word,
                               const std::vector<bool>& reversed) {
  GraphBuilder b(3);  // node-free, retarget with at_dim
  int loop = b.add_loop();
  for (size_t i = 0; i < word.size(); ++i) {
    bool rev = i < reversed.size() && reversed[i];
    // input_at_end1=false yields tr(A_1 A_2 ... A_k) in word order
    b.mark(loop, word[i], /*input_at_end1=*/rev);
  }
  return b.build();
}

DiagramGraph char_coeff_diagram(int n, int k, const std::string& matrix) {
  if (k < 0 || k > n) throw std::invalid_argument("char_coeff_diagram needs 0 <= k <= n");
  GraphBuilder b(n);
  int x = b.add_node();
  int y = b.add_node();
  for (int s = 0; s < n; ++s) {
    int e = b.connect(port(x, s), port(y, n - 1 - s));
    if (s < k) b.mark(e, matrix, /*input_at_end1=*/true);
  }
  return b.build();
}

DiagramGraph pfaffian_candidate(int n, const std::string& matrix,
                                const std::vector<std::pair<int, int>>& pairing) {
  if (n % 2 != 0)
    throw std::invalid_argument("pfaffian_candidate: closed one-node diagrams need even n");
  std::vector<std::pair<int, int>> pairs = pairing;
  if (pairs.empty())
    for (int i = 0; i < n / 2; ++i) pairs.emplace_back(i, n - 1 - i);
  std::vector<bool> used(n, false);
  for (auto& [a, c] : pairs) {
    if (a < 0 || c < 0 || a >= n || c >= n || a == c || used[a] || used[c])
      throw std::invalid_argument("pfaffian_candidate: bad port pairing");
    used[a] = used[c] = true;
  }
  GraphBuilder b(n);
  int nd = b.add_node();
  for (auto& [lo, hi] : pairs) {
    int e = b.connect(port(nd, lo), port(nd, hi));
    b.mark(e, matrix, /*input_at_end1=*/false);  // row at the low port side
  }
  return b.build();
}

DiagramGraph matrix_entry_strand(const std::string& matrix, int i, int j) {
  GraphBuilder b(std::max(i, j));  // smallest dimension the labels fit in
  int e = b.connect(basis(i), basis(j));
  b.mark(e, matrix, /*input_at_end1=*/false);
  return b.build();
}

DiagramGraph node_with_outputs(int n) {
  GraphBuilder b(n);
  int nd = b.add_node();
  for (int s = 0; s < n; ++s) b.connect(port(nd, s), out(s + 1));
  return b.build();
}

namespace {

// node with port order a rotation of (u, v, w); input slots stay tied to
// the names so the four drawings share input ordering
DiagramGraph rotated_triple(int rot) {
  const std::string names[3] = {"u", "v", "w"};
  GraphBuilder b(3);
  int nd = b.add_node();
  for (int s = 0; s < 3; ++s) {
    int which = (s + rot) % 3;
    b.connect(port(nd, s), vin(names[which], which + 1));
  }
  return b.build();
}

DiagramGraph strand_to_output(const std::string& v) {
  GraphBuilder b(3);
  b.connect(vin(v, 1), out(1));
  return b.build();
}

}  // namespace

std::vector<DiagramGraph> triple_chain_forms() {
  return {rotated_triple(0), rotated_triple(1), rotated_triple(2), rotated_triple(0)};
}

std::vector<IdentityPair> identity_suite() {
  std::vector<IdentityPair> suite;

  {  // (u x v) . (w x x) = (u.w)(v.x) - (u.x)(v.w)
    IdentityPair p;
    p.name = "quad-cross";
    p.dim = 3;
    GraphBuilder b(3);
    int n1 = b.add_node(), n2 = b.add_node();
    b.connect(port(n1, 0), vin("u", 1));
    b.connect(port(n1, 1), vin("v", 2));
    b.connect(port(n2, 0), vin("w", 3));
    b.connect(port(n2, 1), vin("x", 4));
    b.connect(port(n1, 2), port(n2, 2));
    p.lhs = DiagramExpression::of(b.build());
    p.rhs = DiagramExpression::of(disjoint_union(dot_diagram("u", "w"), dot_diagram("v", "x"))) -
            DiagramExpression::of(disjoint_union(dot_diagram("u", "x"), dot_diagram("v", "w")));
    p.vector_slots = {"u", "v", "w", "x"};
    suite.push_back(std::move(p));
  }

  {  // (u x v) x w = (u.w)v - (v.w)u
    IdentityPair p;
    p.name = "bac-cab";
    p.dim = 3;
    GraphBuilder b(3);
    int n1 = b.add_node(), n2 = b.add_node();
    b.connect(port(n1, 0), vin("u", 1));
    b.connect(port(n1, 1), vin("v", 2));
    b.connect(port(n1, 2), port(n2, 0));
    b.connect(port(n2, 1), vin("w", 3));
    b.connect(port(n2, 2), out(1));
    p.lhs = DiagramExpression::of(b.build());
    p.rhs = DiagramExpression::of(disjoint_union(dot_diagram("u", "w"), strand_to_output("v"))) -
            DiagramExpression::of(disjoint_union(dot_diagram("v", "w"), strand_to_output("u")));
    p.vector_slots = {"u", "v", "w"};
    suite.push_back(std::move(p));
  }

  {
    auto forms = triple_chain_forms();
    IdentityPair p;
    p.name = "triple-product-chain";
    p.dim = 3;
    p.lhs = DiagramExpression::of(forms[0]);
    p.rhs = DiagramExpression::of(forms[3]);
    p.vector_slots = {"u", "v", "w"};
    suite.push_back(p);
    for (int f = 0; f + 1 < 3; ++f) {
      IdentityPair q;
      q.name = "triple-product-chain-" + std::to_string(f + 2);
      q.dim = 3;
      q.lhs = DiagramExpression::of(forms[f]);
      q.rhs = DiagramExpression::of(forms[f + 1]);
      q.vector_slots = {"u", "v", "w"};
      suite.push_back(std::move(q));
    }
  }

  {  // node with all legs marked A = det(A) times the unmarked node (arity n)
    IdentityPair p;
    p.name = "det-factors-node";
    p.dim = 3;
    GraphBuilder b(3);
    int nd = b.add_node();
    for (int s = 0; s < 3; ++s) {
      int e = b.connect(port(nd, s), out(s + 1));
      b.mark(e, "A", /*input_at_end1=*/false);  // fed from the output side
    }
    p.lhs = DiagramExpression::of(b.build());
    p.rhs = DiagramExpression::of(disjoint_union(det_node(3, "A"), node_with_outputs(3)));
    p.strategy = Strategy::kRandomized;
    p.matrix_symbols = {"A"};
    suite.push_back(std::move(p));
  }

  for (int n : {2, 3, 4}) {  // closed all-marked two-node diagram = (-1)^(n/2) n! det(A)
    IdentityPair p;
    p.name = n == 3 ? "closed-full-det" : ("closed-full-det-" + std::to_string(n));
    p.dim = n;
    p.lhs = DiagramExpression::of(char_coeff_diagram(n, n, "A"));
    long fact = 1;
    for (int i = 2; i <= n; ++i) fact *= i;
    Rational c = Rational(((n / 2) % 2) ? -fact : fact);
    p.rhs = c * DiagramExpression::of(det_node(n, "A"));
    p.strategy = Strategy::kRandomized;
    p.matrix_symbols = {"A"};
    suite.push_back(std::move(p));
  }

  {  // strand through B then A = strand through the product AB
    IdentityPair p;
    p.name = "marking-fusion";
    p.dim = 3;
    GraphBuilder l(3);
    int e = l.connect(out(2), out(1));
    l.mark(e, "B", /*input_at_end1=*/true);  // input side toward output slot 2
    l.mark(e, "A", /*input_at_end1=*/true);
    p.lhs = DiagramExpression::of(l.build());
    GraphBuilder r(3);
    int e2 = r.connect(out(2), out(1));
    r.mark(e2, "AB", /*input_at_end1=*/true);
    p.rhs = DiagramExpression::of(r.build());
    p.strategy = Strategy::kRandomized;
    p.matrix_symbols = {"A", "B"};
    p.product_bindings = {{"AB", {"A", "B"}}};
    suite.push_back(std::move(p));
  }

  return suite;
}

const IdentityPair& find_identity(const std::string& name) {
  static const std::vector<IdentityPair> suite = identity_suite();
  for (const auto& p : suite)
    if (p.name == name) return p;
  throw std::invalid_argument("unknown identity: " + name);
}

std::vector<std::string> target_names() {
  return {"circle",     "dot",                "cross",        "vector-det-node", "det-node",
          "char-coeff", "pfaffian-candidate", "matrix-entry", "trace-word"};
}

DiagramGraph build_target(const std::string& name, int dim) {
  if (name == "circle") return at_dim(trace_word_circle({}), dim);
  if (name == "dot") return at_dim(dot_diagram("u", "v"), dim);
  if (name == "cross") {
    std::vector<std::string> vs;
    for (int i = 1; i < dim; ++i) vs.push_back("u" + std::to_string(i));
    return cross_diagram(dim, vs);
  }
  if (name == "vector-det-node") {
    std::vector<std::string> vs;
    for (int i = 1; i <= dim; ++i) vs.push_back("u" + std::to_string(i));
    return vector_det_node(dim, vs);
  }
  if (name == "det-node") return det_node(dim, "A");
  if (name == "char-coeff") return char_coeff_diagram(dim, dim / 2, "A");
  if (name == "pfaffian-candidate") return pfaffian_candidate(dim, "A");
  if (name == "matrix-entry") return at_dim(matrix_entry_strand("A", 1, std::min(2, dim)), dim);
  if (name == "trace-word") return at_dim(trace_word_circle({"A", "B"}), dim);
  throw std::invalid_argument("unknown catalog target: " + name);
}

}  // namespace td::catalog
