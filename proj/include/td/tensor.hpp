#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "td/rational.hpp"

namespace td {

// Dense tensor over basis labels 1..n, one index per free output slot.
// Entries are stored in lexicographic index order; arity 0 holds a single
// scalar.
template <class S>
class Tensor {
 public:
  Tensor() : dim_(1), arity_(0), entries_(1, Field<S>::zero()) {}
  Tensor(int dim, int arity)
      : dim_(dim), arity_(arity), entries_(cell_count(dim, arity), Field<S>::zero()) {
    if (dim < 1 || arity < 0) throw std::invalid_argument("bad tensor shape");
  }

  static Tensor scalar(int dim, S value) {
    Tensor t(dim, 0);
    t.entries_[0] = std::move(value);
    return t;
  }

  int dim() const { return dim_; }
  int arity() const { return arity_; }
  const std::vector<S>& entries() const { return entries_; }
  std::vector<S>& entries() { return entries_; }

  // index values are 1-based basis labels
  size_t offset(const std::vector<int>& index) const {
    if (static_cast<int>(index.size()) != arity_)
      throw std::invalid_argument("tensor index arity mismatch");
    size_t off = 0;
    for (int v : index) {
      if (v < 1 || v > dim_) throw std::out_of_range("tensor index out of range");
      off = off * dim_ + static_cast<size_t>(v - 1);
    }
    return off;
  }
  const S& at(const std::vector<int>& index) const { return entries_[offset(index)]; }
  S& at(const std::vector<int>& index) { return entries_[offset(index)]; }
  const S& value() const {
    if (arity_ != 0) throw std::logic_error("value() on tensor of arity > 0");
    return entries_[0];
  }

  bool operator==(const Tensor& o) const {
    return dim_ == o.dim_ && arity_ == o.arity_ && entries_ == o.entries_;
  }

  static size_t cell_count(int dim, int arity) {
    size_t c = 1;
    for (int i = 0; i < arity; ++i) c *= static_cast<size_t>(dim);
    return c;
  }

  // Advances a 1-based multi-index in lexicographic order; returns false
  // after the last one.
  static bool next_index(std::vector<int>& index, int dim) {
    for (int i = static_cast<int>(index.size()) - 1; i >= 0; --i) {
      if (index[i] < dim) {
        ++index[i];
        return true;
      }
      index[i] = 1;
    }
    return false;
  }

 private:
  int dim_;
  int arity_;
  std::vector<S> entries_;
};

using RatTensor = Tensor<Rational>;

}  // namespace td
