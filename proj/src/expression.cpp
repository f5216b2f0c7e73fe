#include "td/expression.hpp"

namespace td {

DiagramExpression operator+(const DiagramExpression& a, const DiagramExpression& b) {
  if (a.terms.empty()) {
    DiagramExpression r = b;
    if (!b.terms.empty() || b.dim != 0) return r;
    return a;
  }
  DiagramExpression r = a;
  for (const auto& [c, g] : b.terms) r.add_term(c, g);
  return r;
}

DiagramExpression operator-(const DiagramExpression& a, const DiagramExpression& b) {
  return a + (Rational(-1) * b);
}

DiagramExpression operator*(const Rational& c, const DiagramExpression& e) {
  DiagramExpression r = e;
  for (auto& [coeff, g] : r.terms) coeff *= c;
  return r;
}

DiagramExpression collect_terms(const DiagramExpression& e) {
  DiagramExpression r = DiagramExpression::zero(e.dim, e.arity);
  std::vector<DiagramGraph> canon;
  for (const auto& [c, g] : e.terms) {
    DiagramGraph cg = canonicalize(g);
    bool merged = false;
    for (size_t i = 0; i < canon.size(); ++i) {
      if (canon[i] == cg) {
        r.terms[i].first += c;
        merged = true;
        break;
      }
    }
    if (!merged) {
      canon.push_back(cg);
      r.terms.emplace_back(c, std::move(cg));
    }
  }
  // drop cancelled terms
  DiagramExpression out = DiagramExpression::zero(e.dim, e.arity);
  for (auto& [c, g] : r.terms)
    if (sgn(c) != 0) out.terms.emplace_back(std::move(c), std::move(g));
  return out;
}

}  // namespace td
