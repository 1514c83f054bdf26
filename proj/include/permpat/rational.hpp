#pragma once

// Exact big-integer / rational arithmetic used by the enumeration and bound
// modules. Backed by Boost.Multiprecision (header-only).

#include <algorithm>
#include <cstdint>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace permpat {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

inline BigInt factorial_big(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

inline BigInt binomial_big(int n, int k) {
  if (k < 0 || k > n || n < 0) return 0;
  k = std::min(k, n - k);
  BigInt b = 1;
  for (int i = 0; i < k; ++i) {
    b *= n - i;
    b /= i + 1;  // exact: any i+1 consecutive integers contain a multiple
  }
  return b;
}

// 20! is the largest factorial representable in 64 bits.
inline std::uint64_t factorial_u64(int n) {
  if (n < 0 || n > 20) throw std::invalid_argument("factorial_u64: n must be in [0, 20]");
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
  return f;
}

inline BigInt pow2_big(int e) {
  BigInt one = 1;
  return one << e;
}

inline double to_double(const BigInt& v) { return v.convert_to<double>(); }
inline double to_double(const BigRat& q) { return q.convert_to<double>(); }

}  // namespace permpat
