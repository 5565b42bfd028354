#pragma once

#include "morphic/bigint.hpp"
#include "morphic/error.hpp"
#include "morphic/word.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace morphic {

/// Dense square matrix of arbitrary-precision integers.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), a_(n * n) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  BigInt& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  const BigInt& operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  Matrix operator*(const Matrix& o) const {
    if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "matrix size mismatch");
    Matrix r(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = 0; k < n_; ++k) {
        const BigInt& x = (*this)(i, k);
        if (x == 0) continue;
        for (std::size_t j = 0; j < n_; ++j)
          if (o(k, j) != 0) r(i, j) += x * o(k, j);
      }
    return r;
  }

  bool operator==(const Matrix& o) const { return n_ == o.n_ && a_ == o.a_; }

  Matrix pow(std::size_t k) const {
    Matrix r = identity(n_);
    Matrix b = *this;
    while (k) {
      if (k & 1) r = r * b;
      k >>= 1;
      if (k) b = b * b;
    }
    return r;
  }

  Matrix transpose() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix restrict(const std::vector<std::size_t>& idx) const {
    Matrix r(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
      for (std::size_t j = 0; j < idx.size(); ++j) r(i, j) = (*this)(idx[i], idx[j]);
    return r;
  }

  bool positive() const {
    for (const auto& v : a_)
      if (v <= 0) return false;
    return true;
  }

  BigInt column_sum(std::size_t j) const {
    BigInt s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += (*this)(i, j);
    return s;
  }

  BigInt row_sum(std::size_t i) const {
    BigInt s = 0;
    for (std::size_t j = 0; j < n_; ++j) s += (*this)(i, j);
    return s;
  }

  std::string str() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) os << (j ? " " : "") << (*this)(i, j);
      os << '\n';
    }
    return os.str();
  }

 private:
  std::size_t n_ = 0;
  std::vector<BigInt> a_;
};

/// Entry (i,j) counts occurrences of letter i in σ(j).
inline Matrix incidence_matrix(const Morphism& sigma) {
  if (!sigma.is_endomorphism()) throw Error(ErrorKind::InvalidArgument, "incidence: not an endomorphism");
  Matrix m(sigma.source_size());
  for (std::size_t j = 0; j < sigma.source_size(); ++j)
    for (Letter i : sigma(static_cast<Letter>(j))) m(i, j) += 1;
  return m;
}

/// Parikh vector of a word.
inline std::vector<BigInt> parikh(const Word& w, std::size_t n) {
  std::vector<BigInt> v(n);
  for (Letter c : w) v.at(c) += 1;
  return v;
}

/// |σ^k(w)| computed from M^k without expanding the word.
inline BigInt image_length(const Matrix& mk, const Word& w) {
  auto v = parikh(w, mk.size());
  BigInt total = 0;
  for (std::size_t j = 0; j < v.size(); ++j)
    if (v[j] != 0) total += v[j] * mk.column_sum(j);
  return total;
}

}  // namespace morphic
