#pragma once

#include "morphic/bigint.hpp"
#include "morphic/matrix.hpp"

#include <string>
#include <vector>

namespace morphic {

/// Univariate polynomial with rational coefficients, lowest degree first.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Polynomial monomial(std::size_t deg, Rational coeff = 1) {
    std::vector<Rational> c(deg + 1);
    c[deg] = std::move(coeff);
    return Polynomial(std::move(c));
  }

  bool is_zero() const noexcept { return c_.empty(); }
  int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
  const Rational& coeff(std::size_t i) const { return c_.at(i); }
  const std::vector<Rational>& coeffs() const noexcept { return c_; }
  const Rational& leading() const { return c_.back(); }

  Rational eval(const Rational& x) const {
    Rational r = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
    return r;
  }

  int sign_at(const Rational& x) const {
    Rational v = eval(x);
    return v > 0 ? 1 : (v < 0 ? -1 : 0);
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<Rational> d(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = c_[i] * static_cast<long>(i);
    return Polynomial(std::move(d));
  }

  Polynomial operator-() const {
    auto c = c_;
    for (auto& x : c) x = -x;
    return Polynomial(std::move(c));
  }

  Polynomial operator*(const Polynomial& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<Rational> r(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
      for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    return Polynomial(std::move(r));
  }

  /// Euclidean division; returns {quotient, remainder}.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw Error(ErrorKind::InvalidArgument, "polynomial division by zero");
    std::vector<Rational> rem = c_;
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<Rational> q(c_.size() - d.c_.size() + 1);
    for (int k = degree() - d.degree(); k >= 0; --k) {
      Rational f = rem[k + d.degree()] / d.leading();
      q[k] = f;
      if (f == 0) continue;
      for (int j = 0; j <= d.degree(); ++j) rem[k + j] -= f * d.c_[j];
    }
    rem.resize(d.c_.size() - 1);
    return {Polynomial(std::move(q)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return {};
    auto c = c_;
    Rational l = c.back();
    for (auto& x : c) x /= l;
    return Polynomial(std::move(c));
  }

  bool operator==(const Polynomial& o) const { return c_ == o.c_; }

  std::string str() const {
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0) continue;
      if (!s.empty()) s += " ";
      s += (c_[i] < 0 ? "-" : (s.empty() ? "" : "+ "));
      if (!s.empty() && s.back() == '-' && i != degree()) s += " ";
      Rational a = c_[i] < 0 ? Rational(-c_[i]) : c_[i];
      if (a != 1 || i == 0) s += to_string(a);
      if (i >= 1) s += "x";
      if (i >= 2) s += "^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rational> c_;
};

inline Polynomial gcd(Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// p / gcd(p, p'), monic.
inline Polynomial squarefree_part(const Polynomial& p) {
  if (p.degree() <= 0) return p.monic();
  Polynomial g = gcd(p, p.derivative());
  return p.divmod(g).first.monic();
}

/// det(xI − M) by the Faddeev–LeVerrier recurrence over the rationals.
inline Polynomial characteristic_polynomial(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  std::vector<Rational> c(n + 1);
  c[n] = 1;
  std::vector<std::vector<Rational>> mk(n, std::vector<Rational>(n));  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = M * M_{k-1} + c_{n-k+1} I
    std::vector<std::vector<Rational>> next(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (m[i][l] == 0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += m[i][l] * mk[l][j];
      }
    for (std::size_t i = 0; i < n; ++i) next[i][i] += c[n - k + 1];
    mk = std::move(next);
    Rational tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr += m[i][l] * mk[l][i];
    c[n - k] = -tr / static_cast<long>(k);
  }
  return Polynomial(std::move(c));
}

inline Polynomial characteristic_polynomial(const Matrix& m) {
  std::vector<std::vector<Rational>> r(m.size(), std::vector<Rational>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) r[i][j] = Rational(m(i, j));
  return characteristic_polynomial(r);
}

/// Sturm chain of a squarefree polynomial.
class SturmChain {
 public:
  explicit SturmChain(const Polynomial& p) {
    chain_.push_back(p);
    if (p.degree() <= 0) return;
    chain_.push_back(p.derivative());
    while (true) {
      auto r = chain_[chain_.size() - 2].divmod(chain_.back()).second;
      if (r.is_zero()) break;
      chain_.push_back(-r);
    }
  }

  int variations(const Rational& x) const {
    int count = 0, prev = 0;
    for (const auto& q : chain_) {
      int s = q.sign_at(x);
      if (s == 0) continue;
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
    return count;
  }

  /// Distinct real roots in (a, b].
  int count(const Rational& a, const Rational& b) const { return variations(a) - variations(b); }

  /// Distinct real roots in [a, b].
  int count_closed(const Rational& a, const Rational& b) const {
    if (a == b) return chain_.front().sign_at(a) == 0 ? 1 : 0;
    return count(a, b) + (chain_.front().sign_at(a) == 0 ? 1 : 0);
  }

  const Polynomial& poly() const { return chain_.front(); }

 private:
  std::vector<Polynomial> chain_;
};

/// Strict upper bound on the modulus of every root (Cauchy).
inline Rational root_bound(const Polynomial& p) {
  Rational m = 0;
  for (int i = 0; i < p.degree(); ++i) {
    Rational a = p.coeff(i) / p.leading();
    if (a < 0) a = -a;
    if (a > m) m = a;
  }
  return m + 1;
}

}  // namespace morphic
