#pragma once

#include <string>
#include <variant>
#include <vector>

namespace td {

// An edge end attached to port `slot` of an internal node. Port slots run
// 0..dim-1 counter-clockwise from the node's cilium; slot 0 is the first
// edge after the cilium.
struct NodePort {
  int node = 0;
  int slot = 0;
  bool operator==(const NodePort&) const = default;
};

// Terminal labeled by a bound vector; `slot` is the 1-based input position.
struct VectorInput {
  std::string name;
  int slot = 0;
  bool operator==(const VectorInput&) const = default;
};

// Terminal carrying a fixed basis label in 1..dim.
struct BasisLabel {
  int label = 0;
  bool operator==(const BasisLabel&) const = default;
};

// Unlabeled terminal; `slot` is the 1-based output position of the
// diagram's function.
struct FreeOutput {
  int slot = 0;
  bool operator==(const FreeOutput&) const = default;
};

using Attachment = std::variant<NodePort, VectorInput, BasisLabel, FreeOutput>;

// Directed matrix marking along an edge. The strand feeding the matrix is
// its input side; `input_at_end1` records which way the chevron points.
struct Marking {
  std::string matrix;
  bool input_at_end1 = true;
  bool operator==(const Marking&) const = default;
};

// One strand of a diagram. Open edges run end1 -> end2 with markings laid
// out in that order. Closed edges are free loops; their markings sit in
// cyclic order and `input_at_end1` means the input side faces the
// cyclically previous marking.
struct Edge {
  bool closed = false;
  Attachment end1;
  Attachment end2;
  std::vector<Marking> markings;
  bool operator==(const Edge&) const = default;
};

// Combinatorial trace diagram. Node ids run 0..node_count-1 and every node
// has exactly `dim` port slots, each used by exactly one edge end.
struct DiagramGraph {
  int dim = 0;
  int node_count = 0;
  std::vector<Edge> edges;
  bool operator==(const DiagramGraph&) const = default;
};

struct Fault {
  std::string kind;
  std::string where;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Fault> faults;
};

// Checks every structural invariant; faults are data, never exceptions.
ValidationReport validate(const DiagramGraph& g);

// Number of free output slots (0 for closed/scalar diagrams).
int output_arity(const DiagramGraph& g);

// Deterministic renumbering: nodes and edges are re-indexed by a traversal
// seeded from output slot 1, then input slots, then basis terminals, then
// remaining components in insertion order. Edge ends are oriented by first
// reach. Two graphs are structurally equal iff their canonical forms are
// identical.
DiagramGraph canonicalize(const DiagramGraph& g);
bool canonical_equal(const DiagramGraph& a, const DiagramGraph& b);

// Disjoint union; g2's output and input slots are renumbered to follow
// g1's. Evaluation multiplies entrywise (empty diagram is the unit).
DiagramGraph disjoint_union(const DiagramGraph& g1, const DiagramGraph& g2);

// Seeded permutation of node ids, edge order and edge end1/end2 roles;
// evaluation-invariant by construction.
DiagramGraph shuffle_ids(const DiagramGraph& g, uint64_t seed);

// Cyclically advances the cilium of `node` by `steps` ports. Evaluation
// scales by (-1)^((dim-1)*steps).
DiagramGraph rotate_ciliation(const DiagramGraph& g, int node, int steps);

// Re-stamps the dimension of a node-free diagram (dot products, trace
// circles and other strand-only shapes are dimension-generic). Throws if
// the graph has nodes or a basis label exceeding n.
DiagramGraph at_dim(const DiagramGraph& g, int n);

// Incremental construction helper; build() validates and throws
// std::invalid_argument listing the first fault if the graph is broken.
class GraphBuilder {
 public:
  explicit GraphBuilder(int dim) : dim_(dim) { g_.dim = dim; }

  int add_node() { return g_.node_count++; }

  int connect(Attachment a, Attachment b) {
    Edge e;
    e.end1 = std::move(a);
    e.end2 = std::move(b);
    g_.edges.push_back(std::move(e));
    return static_cast<int>(g_.edges.size()) - 1;
  }

  int add_loop() {
    Edge e;
    e.closed = true;
    g_.edges.push_back(std::move(e));
    return static_cast<int>(g_.edges.size()) - 1;
  }

  // appends a marking at the end2-most (or cyclically last) position
  void mark(int edge, std::string matrix, bool input_at_end1 = true) {
    g_.edges.at(edge).markings.push_back({std::move(matrix), input_at_end1});
  }

  DiagramGraph build() const;
  const DiagramGraph& peek() const { return g_; }

 private:
  int dim_;
  DiagramGraph g_;
};

inline NodePort port(int node, int slot) { return NodePort{node, slot}; }
inline VectorInput vin(std::string name, int slot) { return VectorInput{std::move(name), slot}; }
inline BasisLabel basis(int label) { return BasisLabel{label}; }
inline FreeOutput out(int slot) { return FreeOutput{slot}; }

}  // namespace td
