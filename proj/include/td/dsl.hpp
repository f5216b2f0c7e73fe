#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "td/environment.hpp"
#include "td/expression.hpp"
#include "td/graph.hpp"
#include "td/oracles.hpp"
#include "td/tensor.hpp"

namespace td::dsl {

struct ParseError : std::runtime_error {
  int line;
  int col;
  ParseError(int line_, int col_, const std::string& what_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

// One parsed .td file: a dimension, exact bindings, named diagrams and
// named linear combinations (terms reference diagram or expr names).
struct Document {
  int dim = 0;
  std::vector<std::pair<std::string, oracle::Mat>> matrices;
  std::vector<std::pair<std::string, oracle::Vec>> vectors;
  std::vector<std::pair<std::string, DiagramGraph>> diagrams;

  struct Expr {
    std::string name;
    std::vector<std::pair<Rational, std::string>> terms;
  };
  std::vector<Expr> exprs;

  const DiagramGraph* find_diagram(const std::string& name) const;
  const Expr* find_expr(const std::string& name) const;
  bool has_name(const std::string& name) const;

  // resolves a diagram or expr name into a flat expression
  DiagramExpression materialize(const std::string& name) const;

  Environment<Rational> environment() const;
};

Document parse(const std::string& text);

// Canonical text form; parse(serialize(doc)) is structurally identical to
// doc and serialize is a fixed point after one cycle.
std::string serialize(const Document& doc);

// Graphviz rendering: filled circles for nodes (cilium flagged on the
// port-0 edge), chevron boxes for markings, labeled boxes for terminals.
// Byte-identical across runs for canonically equal graphs.
std::string to_dot(const DiagramGraph& g);

std::string tensor_to_json(const Tensor<Rational>& t);
std::string tensor_to_json(const Tensor<double>& t);

}  // namespace td::dsl
