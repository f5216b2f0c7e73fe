#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "td/graph.hpp"
#include "td/rational.hpp"

namespace td {

// Formal linear combination of diagrams with exact rational coefficients.
// All terms must share dim and free-output arity; the empty combination is
// the zero function of the declared arity.
struct DiagramExpression {
  std::vector<std::pair<Rational, DiagramGraph>> terms;
  int dim = 0;
  int arity = 0;

  static DiagramExpression zero(int dim, int arity) {
    DiagramExpression e;
    e.dim = dim;
    e.arity = arity;
    return e;
  }

  static DiagramExpression of(const DiagramGraph& g, Rational coeff = Rational(1)) {
    DiagramExpression e;
    e.dim = g.dim;
    e.arity = output_arity(g);
    e.terms.emplace_back(std::move(coeff), g);
    return e;
  }

  DiagramExpression& add_term(Rational coeff, const DiagramGraph& g) {
    if (terms.empty() && dim == 0) {
      dim = g.dim;
      arity = output_arity(g);
    }
    if (g.dim != dim) throw std::invalid_argument("expression term dimension mismatch");
    if (output_arity(g) != arity) throw std::invalid_argument("expression term arity mismatch");
    terms.emplace_back(std::move(coeff), g);
    return *this;
  }
};

DiagramExpression operator+(const DiagramExpression& a, const DiagramExpression& b);
DiagramExpression operator-(const DiagramExpression& a, const DiagramExpression& b);
DiagramExpression operator*(const Rational& c, const DiagramExpression& e);

// Merges structurally equal terms (canonical renumbering) and drops zero
// coefficients.
DiagramExpression collect_terms(const DiagramExpression& e);

}  // namespace td
