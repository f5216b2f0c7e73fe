#include "td/oracles.hpp"

#include <stdexcept>

namespace td::oracle {

Mat identity(int n) {
  Mat m(n, Vec(n, Rational(0)));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

Mat transpose(const Mat& a) {
  int n = static_cast<int>(a.size());
  Mat m(a.empty() ? 0 : a[0].size(), Vec(n));
  for (int i = 0; i < n; ++i)
    for (size_t j = 0; j < a[i].size(); ++j) m[j][i] = a[i][j];
  return m;
}

Mat add(const Mat& a, const Mat& b) {
  Mat m = a;
  for (size_t i = 0; i < m.size(); ++i)
    for (size_t j = 0; j < m[i].size(); ++j) m[i][j] += b[i][j];
  return m;
}

Mat matmul(const Mat& a, const Mat& b) {
  int n = static_cast<int>(a.size());
  Mat m(n, Vec(n, Rational(0)));
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j) m[i][j] += a[i][k] * b[k][j];
  return m;
}

Rational trace(const Mat& a) {
  Rational t(0);
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

Rational det_cofactor(const Mat& m) {
  int n = static_cast<int>(m.size());
  if (n == 0) return Rational(1);
  if (n == 1) return m[0][0];
  Rational total(0);
  for (int j = 0; j < n; ++j) {
    if (sgn(m[0][j]) == 0) continue;
    Mat minor(n - 1, Vec(n - 1));
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        minor[r - 1][cc++] = m[r][c];
      }
    }
    Rational term = m[0][j] * det_cofactor(minor);
    if (j % 2) term = -term;
    total += term;
  }
  return total;
}

Rational trace_word(const Environment<Rational>& env, const std::vector<std::string>& word) {
  if (word.empty()) return Rational(env.dim);
  Mat m = env.matrix(word[0]);
  for (size_t i = 1; i < word.size(); ++i) m = matmul(m, env.matrix(word[i]));
  return trace(m);
}

CharPolyCoefficients char_poly_coeffs(const Mat& a) {
  int n = static_cast<int>(a.size());
  if (n > 6) throw std::invalid_argument("char_poly_coeffs guarded to n <= 6");
  CharPolyCoefficients out;
  out.c.assign(n + 1, Rational(0));
  out.c[0] = 1;
  // sum principal k x k minors over all index subsets
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1 << i)) idx.push_back(i);
    Mat sub(idx.size(), Vec(idx.size()));
    for (size_t r = 0; r < idx.size(); ++r)
      for (size_t c = 0; c < idx.size(); ++c) sub[r][c] = a[idx[r]][idx[c]];
    out.c[idx.size()] += det_cofactor(sub);
  }
  return out;
}

namespace {

Rational pfaffian_rec(const Mat& m, std::vector<int>& live) {
  if (live.empty()) return Rational(1);
  int a = live[0];
  Rational total(0);
  for (size_t j = 1; j < live.size(); ++j) {
    int b = live[j];
    if (sgn(m[a][b]) == 0) continue;
    std::vector<int> rest;
    for (size_t t = 1; t < live.size(); ++t)
      if (t != j) rest.push_back(live[t]);
    Rational term = m[a][b] * pfaffian_rec(m, rest);
    if ((j - 1) % 2) term = -term;
    total += term;
  }
  return total;
}

}  // namespace

Rational pfaffian(const Mat& m) {
  int n = static_cast<int>(m.size());
  if (n % 2 != 0) throw std::invalid_argument("pfaffian: odd dimension");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (m[i][j] != -m[j][i]) throw std::invalid_argument("pfaffian: matrix not antisymmetric");
  std::vector<int> live(n);
  for (int i = 0; i < n; ++i) live[i] = i;
  return pfaffian_rec(m, live);
}

}  // namespace td::oracle

namespace td {

namespace {
uint64_t splitmix64(uint64_t& x) {
  x += 0x9E3779B97F4A7C15ull;
  uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}
}  // namespace

Sampler::Sampler(uint64_t seed, uint64_t stream) {
  uint64_t s = seed;
  uint64_t a = splitmix64(s);
  s = stream ^ 0xD1B54A32D192ED03ull;
  uint64_t b = splitmix64(s);
  state_ = a ^ (b * 0x9E3779B97F4A7C15ull + 1);
}

uint64_t Sampler::next() { return splitmix64(state_); }

long Sampler::int_in(long lo, long hi) {
  uint64_t span = static_cast<uint64_t>(hi - lo + 1);
  return lo + static_cast<long>(next() % span);
}

oracle::Mat Sampler::int_matrix(int n, long lo, long hi) {
  oracle::Mat m(n, oracle::Vec(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m[i][j] = Rational(int_in(lo, hi));
  return m;
}

oracle::Vec Sampler::int_vector(int n, long lo, long hi) {
  oracle::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = Rational(int_in(lo, hi));
  return v;
}

}  // namespace td
