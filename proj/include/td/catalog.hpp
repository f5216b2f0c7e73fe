#pragma once

#include <optional>
#include <string>
#include <vector>

#include "td/expression.hpp"
#include "td/graph.hpp"

namespace td::catalog {

// Two vector terminals joined by one edge; evaluates to u . v.
DiagramGraph dot_diagram(const std::string& u, const std::string& v);

// One node, ports counter-clockwise from the cilium: the n-1 vector inputs
// in order, then one free output. The generalized cross product.
DiagramGraph cross_diagram(int n, const std::vector<std::string>& vectors);

// One node, all ports vector inputs; evaluates to det of the matrix with
// those columns.
DiagramGraph vector_det_node(int n, const std::vector<std::string>& vectors);

// One node; port k runs through a marking to the basis terminal k+1.
// Evaluates to det(A).
DiagramGraph det_node(int n, const std::string& matrix);

// Sum over S_n of sgn(sigma) times n marked strands k -> sigma(k);
// evaluates to det(A). Guarded at n <= 6 (n! terms).
DiagramExpression det_permutation_sum(int n, const std::string& matrix);

// Closed loop through the markings in word order; evaluates to
// tr(A_1 A_2 ... A_k), a bare circle (empty word) to n. A true entry in
// `reversed` flips that marking (transpose semantics).
DiagramGraph trace_word_circle(const std::vector<std::string>& word,
                               const std::vector<bool>& reversed = {});

// Two nodes joined by n parallel strands (port i to port n-1-i), the first
// k strands marked; proportional to the k-th characteristic coefficient.
DiagramGraph char_coeff_diagram(int n, int k, const std::string& matrix);

// Single degree-n node, ports joined in nested marked loops
// (slot i with slot n-1-i). n must be even. An explicit pairing may
// replace the nested one.
DiagramGraph pfaffian_candidate(int n, const std::string& matrix,
                                const std::vector<std::pair<int, int>>& pairing = {});

// Strand basis j -> marking -> basis i; evaluates to a_ij.
DiagramGraph matrix_entry_strand(const std::string& matrix, int i, int j);

// Plain node with every port wired to a free output (slot s+1 at port s).
DiagramGraph node_with_outputs(int n);

// The four topologically equivalent drawings of the scalar triple product
// (cyclic rotations of the same ciliated node).
std::vector<DiagramGraph> triple_chain_forms();

enum class Strategy { kBasisExhaustion, kRandomized };

struct IdentityPair {
  std::string name;
  int dim = 3;
  DiagramExpression lhs;
  DiagramExpression rhs;
  Strategy strategy = Strategy::kBasisExhaustion;
  std::vector<std::string> vector_slots;    // names exhausted over the basis
  std::vector<std::string> matrix_symbols;  // names sampled per trial
  // names derived from sampled ones, e.g. AB := A*B for marking fusion
  std::vector<std::pair<std::string, std::pair<std::string, std::string>>> product_bindings;
};

// Builder pairs for the displayed identities expressible as plain diagram
// expressions. Dimension-2 rewriting identities live with the wiring
// engine.
std::vector<IdentityPair> identity_suite();

const IdentityPair& find_identity(const std::string& name);

// Catalog diagrams addressable by stable names from the CLI. Names taking
// a dimension build at `dim`; others ignore it.
std::vector<std::string> target_names();
DiagramGraph build_target(const std::string& name, int dim);

}  // namespace td::catalog
