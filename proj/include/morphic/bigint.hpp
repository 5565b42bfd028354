#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <limits>
#include <string>

namespace morphic {

// expression templates off: values are plain types in std::min/max and auto
using BigInt = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                             boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::rational_adaptor<
                                                   boost::multiprecision::cpp_int_backend<>>,
                                               boost::multiprecision::et_off>;

inline BigInt ceil_of(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt r = n / d;
  if (r * d < n) ++r;
  return r;
}

inline BigInt floor_of(const Rational& q) {
  BigInt n = boost::multiprecision::numerator(q);
  BigInt d = boost::multiprecision::denominator(q);
  BigInt r = n / d;
  if (r * d > n) --r;
  return r;
}

inline std::string to_string(const BigInt& v) { return v.str(); }

inline std::string to_string(const Rational& q) {
  if (boost::multiprecision::denominator(q) == 1) return boost::multiprecision::numerator(q).str();
  return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

inline Rational pow_rational(const Rational& base, std::size_t k) {
  Rational r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= base;
  return r;
}

inline BigInt pow_big(const BigInt& base, std::size_t k) {
  BigInt r = 1;
  for (std::size_t i = 0; i < k; ++i) r *= base;
  return r;
}

/// Saturating conversion used for loop bounds and scan lengths.
inline std::uint64_t clamp_u64(const BigInt& v) {
  if (v < 0) return 0;
  if (v > BigInt(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(v);
}

}  // namespace morphic
