#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "td/environment.hpp"
#include "td/rational.hpp"

namespace td::oracle {

using Mat = Matrix<Rational>;
using Vec = std::vector<Rational>;

Mat identity(int n);
Mat transpose(const Mat& a);
Mat add(const Mat& a, const Mat& b);
Mat matmul(const Mat& a, const Mat& b);
Rational trace(const Mat& a);

// Plain cofactor expansion along the first row; the determinant oracle the
// diagram evaluators are checked against.
Rational det_cofactor(const Mat& m);

// tr of the product of the named matrices in word order; "" is n.
Rational trace_word(const Environment<Rational>& env, const std::vector<std::string>& word);

// Coefficients of det(A - lambda I) with the convention
// det(A - lambda I) = sum_k c[k] * (-lambda)^(n-k), so c[0] = 1,
// c[1] = tr(A), c[n] = det(A).
struct CharPolyCoefficients {
  std::vector<Rational> c;
};

// c_k as the sum of all principal k x k minors, via the cofactor oracle.
CharPolyCoefficients char_poly_coeffs(const Mat& a);

// Brute-force sum over perfect matchings with the standard sign
// convention. Throws on odd dimension or non-antisymmetric input.
Rational pfaffian(const Mat& m);

}  // namespace td::oracle

namespace td {

// Deterministic integer sampler (splitmix64), split per (seed, stream) so
// parallel trials see fixed values regardless of scheduling.
class Sampler {
 public:
  explicit Sampler(uint64_t seed, uint64_t stream = 0);
  uint64_t next();
  long int_in(long lo, long hi);  // inclusive
  oracle::Mat int_matrix(int n, long lo = -9, long hi = 9);
  oracle::Vec int_vector(int n, long lo = -9, long hi = 9);

 private:
  uint64_t state_;
};

}  // namespace td
