#pragma once

#include "morphic/matrix.hpp"
#include "morphic/polynomial.hpp"

#include <compare>
#include <string>

namespace morphic {

/// Real algebraic number given by a squarefree polynomial and a rational
/// interval [lo, hi] containing exactly one of its roots.
class PerronValue {
 public:
  PerronValue() : PerronValue(Rational(0)) {}

  /// Exact rational value.
  explicit PerronValue(const Rational& v)
      : poly_(Polynomial({-v, Rational(1)})), lo_(v), hi_(v) {}

  /// Largest real root of p. Throws if p has no real root.
  static PerronValue largest_root(const Polynomial& p) {
    PerronValue r;
    r.poly_ = squarefree_part(p);
    if (r.poly_.degree() < 1) throw Error(ErrorKind::InvalidArgument, "polynomial has no roots");
    SturmChain sc(r.poly_);
    Rational hi = root_bound(r.poly_);
    Rational lo = -hi;
    if (sc.count(lo, hi) == 0) throw Error(ErrorKind::InvalidArgument, "polynomial has no real roots");
    while (true) {
      if (r.poly_.sign_at(hi) == 0) {
        lo = hi;
        break;
      }
      if (sc.count(lo, hi) == 1 && r.poly_.sign_at(lo) != 0) break;
      Rational mid = (lo + hi) / 2;
      if (sc.count(mid, hi) >= 1)
        lo = mid;
      else
        hi = mid;
    }
    r.lo_ = lo;
    r.hi_ = hi;
    return r;
  }

  /// Spectral radius of a non-negative integer matrix.
  static PerronValue spectral_radius(const Matrix& m) {
    if (m.size() == 0) return PerronValue(Rational(0));
    return largest_root(characteristic_polynomial(m));
  }

  const Polynomial& polynomial() const noexcept { return poly_; }
  const Rational& lo() const noexcept { return lo_; }
  const Rational& hi() const noexcept { return hi_; }
  bool exact() const noexcept { return lo_ == hi_; }

  /// Halves the isolating interval (or lands on the root exactly).
  PerronValue refined() const {
    if (exact()) return *this;
    PerronValue r = *this;
    Rational mid = (lo_ + hi_) / 2;
    if (poly_.sign_at(mid) == 0) {
      r.lo_ = r.hi_ = mid;
      return r;
    }
    SturmChain sc(poly_);
    if (sc.count_closed(mid, hi_) == 1)
      r.lo_ = mid;
    else
      r.hi_ = mid;
    return r;
  }

  PerronValue refined_to(const Rational& width) const {
    PerronValue r = *this;
    while (r.hi_ - r.lo_ > width) r = r.refined();
    return r;
  }

  /// Handle for value^k, with k ≥ 1; assumes value ≥ 0.
  PerronValue pow(std::size_t k) const {
    if (k == 0) throw Error(ErrorKind::InvalidArgument, "PerronValue::pow: k must be positive");
    if (exact()) return PerronValue(pow_rational(lo_, k));
    // companion matrix of the defining polynomial; its k-th power has eigenvalues λ^k
    const Polynomial mp = poly_.monic();
    const std::size_t n = static_cast<std::size_t>(mp.degree());
    std::vector<std::vector<Rational>> comp(n, std::vector<Rational>(n));
    for (std::size_t i = 1; i < n; ++i) comp[i][i - 1] = 1;
    for (std::size_t i = 0; i < n; ++i) comp[i][n - 1] = -mp.coeff(i);
    auto ck = comp;
    for (std::size_t step = 1; step < k; ++step) {
      std::vector<std::vector<Rational>> nx(n, std::vector<Rational>(n));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < n; ++l) {
          if (ck[i][l] == 0) continue;
          for (std::size_t j = 0; j < n; ++j) nx[i][j] += ck[i][l] * comp[l][j];
        }
      ck = std::move(nx);
    }
    PerronValue r;
    r.poly_ = squarefree_part(characteristic_polynomial(ck));
    SturmChain sc(r.poly_);
    PerronValue base = *this;
    while (base.lo_ < 0) base = base.refined();
    while (true) {
      Rational lo = pow_rational(base.lo_, k), hi = pow_rational(base.hi_, k);
      if (sc.count_closed(lo, hi) == 1) {
        r.lo_ = lo;
        r.hi_ = hi;
        if (base.exact()) r.poly_ = Polynomial({-lo, Rational(1)});
        return r;
      }
      base = base.refined();
    }
  }

  std::string str() const {
    if (exact()) return to_string(lo_);
    return "root of " + poly_.str() + " in [" + to_string(lo_) + ", " + to_string(hi_) + "]";
  }

  double approx() const { return static_cast<double>((lo_ + hi_) / 2); }

 private:
  Polynomial poly_;
  Rational lo_, hi_;
};

/// Exact trichotomy between two algebraic handles.
inline std::strong_ordering compare_perron(PerronValue p, PerronValue q) {
  while (true) {
    if (p.hi() < q.lo()) return std::strong_ordering::less;
    if (q.hi() < p.lo()) return std::strong_ordering::greater;
    Rational lo = p.lo() > q.lo() ? p.lo() : q.lo();
    Rational hi = p.hi() < q.hi() ? p.hi() : q.hi();
    Polynomial g = gcd(p.polynomial(), q.polynomial());
    if (g.degree() >= 1 && SturmChain(g).count_closed(lo, hi) >= 1) return std::strong_ordering::equal;
    p = p.refined();
    q = q.refined();
  }
}

inline bool operator==(const PerronValue& a, const PerronValue& b) {
  return compare_perron(a, b) == std::strong_ordering::equal;
}

inline std::strong_ordering operator<=>(const PerronValue& a, const PerronValue& b) { return compare_perron(a, b); }

}  // namespace morphic
