#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "td/rational.hpp"

namespace td {

template <class S>
using Matrix = std::vector<std::vector<S>>;

// Thrown when an evaluated diagram references an unbound or mis-shaped
// name; the message names the symbol.
struct BindingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension plus named matrix and vector bindings for one evaluation.
template <class S>
struct Environment {
  int dim = 0;
  std::map<std::string, Matrix<S>> matrices;
  std::map<std::string, std::vector<S>> vectors;

  explicit Environment(int n = 0) : dim(n) {}

  Environment& bind_matrix(const std::string& name, Matrix<S> m) {
    if (static_cast<int>(m.size()) != dim)
      throw BindingError("matrix " + name + " is not " + std::to_string(dim) + "x" +
                         std::to_string(dim));
    for (const auto& row : m)
      if (static_cast<int>(row.size()) != dim)
        throw BindingError("matrix " + name + " is not " + std::to_string(dim) + "x" +
                           std::to_string(dim));
    matrices[name] = std::move(m);
    return *this;
  }

  Environment& bind_vector(const std::string& name, std::vector<S> v) {
    if (static_cast<int>(v.size()) != dim)
      throw BindingError("vector " + name + " has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(dim));
    vectors[name] = std::move(v);
    return *this;
  }

  const Matrix<S>& matrix(const std::string& name) const {
    auto it = matrices.find(name);
    if (it == matrices.end()) throw BindingError("unbound matrix " + name);
    return it->second;
  }

  const std::vector<S>& vector(const std::string& name) const {
    auto it = vectors.find(name);
    if (it == vectors.end()) throw BindingError("unbound vector " + name);
    return it->second;
  }
};

inline Environment<double> to_f64(const Environment<Rational>& env) {
  Environment<double> out(env.dim);
  for (const auto& [name, m] : env.matrices) {
    Matrix<double> md(m.size());
    for (size_t i = 0; i < m.size(); ++i)
      for (const auto& v : m[i]) md[i].push_back(v.get_d());
    out.matrices[name] = std::move(md);
  }
  for (const auto& [name, v] : env.vectors) {
    std::vector<double> vd;
    for (const auto& x : v) vd.push_back(x.get_d());
    out.vectors[name] = std::move(vd);
  }
  return out;
}

// standard basis vector, 1-based
template <class S>
std::vector<S> basis_vector(int dim, int k) {
  std::vector<S> v(dim, Field<S>::zero());
  v.at(k - 1) = Field<S>::one();
  return v;
}

}  // namespace td
