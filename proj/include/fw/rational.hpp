#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace fw {

// Exact rational scalar. Commutator chains square denominators quickly
// (1/4 factors from the operator identities, binomial coefficients from the
// 1/m series), so an unbounded representation is required.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat rat(long long n, long long d = 1) { return Rat(n, d); }

inline Rat pow_rat(const Rat& base, int e) {
  if (e == 0) return Rat(1);
  Rat b = e > 0 ? base : Rat(1) / base;
  int k = e > 0 ? e : -e;
  Rat out(1);
  while (k > 0) {
    if (k & 1) out *= b;
    b *= b;
    k >>= 1;
  }
  return out;
}

// binomial(r, k) for rational r: r (r-1) ... (r-k+1) / k!
inline Rat binom_rat(const Rat& r, int k) {
  Rat out(1);
  for (int j = 0; j < k; ++j) {
    out *= (r - j);
    out /= (j + 1);
  }
  return out;
}

inline std::string rat_str(const Rat& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline double rat_double(const Rat& r) { return static_cast<double>(r); }

}  // namespace fw
