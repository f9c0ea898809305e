// Small dense matrices over exact scalar types, plus the integer/rational
// elimination algorithms the lattice layer is built on.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "elat/rational.hpp"

namespace elat {

template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t r, std::size_t c) : rows_(r), cols_(c), a_(r * c, T(0)) {}

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool operator==(const Mat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }

  Mat transposed() const {
    Mat t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Mat operator*(const Mat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
    Mat p(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& x = (*this)(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += x * o(k, j);
      }
    return p;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
    std::vector<T> w(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) w[i] += (*this)(i, j) * v[j];
    return w;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> a_;
};

using QMat = Mat<Rat>;
using ZMat = Mat<Int>;

struct Inertia {
  std::size_t positive = 0;
  std::size_t negative = 0;
  std::size_t zero = 0;
};

// Exact inertia of a symmetric rational matrix via congruence diagonalization.
Inertia inertia_of(const QMat& a);

Rat determinant(const QMat& a);

// Solves a*x = b for square nonsingular a.
QVec solve_linear(const QMat& a, const QVec& b);

std::size_t rank_of(const QMat& a);

// Null-space basis. Each vector is scaled to a primitive integer vector with
// the first nonzero entry positive.
std::vector<QVec> kernel_basis_of(const QMat& a);

// Diagonal of the Smith normal form: nonnegative, each dividing the next,
// zeros trailing for rank deficiency.
std::vector<Int> smith_normal_form(const ZMat& a);

// Row-style Hermite normal form; returns only the nonzero rows, pivots
// positive, entries above each pivot reduced to [0, pivot).
ZMat hermite_normal_form(const ZMat& a);

}  // namespace elat
