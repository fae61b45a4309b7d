#pragma once

#include "fw/rational.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>

namespace fw {

// Symbolic constants that can appear in a coefficient with an integer
// exponent. mu0 = e/(2m) is folded into e and m at construction so canonical
// forms stay unique. Sqrt2 is special: its exponent is reduced to {0,1} by
// folding squares into the rational part.
enum class Const : uint8_t { M, E, Mu1, G, C1, C2, PiNum, Sqrt2, COUNT };

constexpr int kNumConsts = static_cast<int>(Const::COUNT);

inline const char* const_name(Const c) {
  switch (c) {
    case Const::M: return "m";
    case Const::E: return "e";
    case Const::Mu1: return "mu1";
    case Const::G: return "G";
    case Const::C1: return "C1";
    case Const::C2: return "C2";
    case Const::PiNum: return "piconst";
    case Const::Sqrt2: return "sqrt2";
    default: return "?";
  }
}

// rat * i^ipow * prod_k const_k^exp_k
struct Coeff {
  Rat rat{0};
  int ipow = 0;  // 0..3
  std::array<int16_t, kNumConsts> exp{};

  Coeff() = default;
  explicit Coeff(Rat r) : rat(std::move(r)) { normalize(); }
  Coeff(Rat r, int ip) : rat(std::move(r)), ipow(ip) { normalize(); }

  static Coeff zero() { return Coeff(); }
  static Coeff one() { return Coeff(Rat(1)); }
  static Coeff imag() { return Coeff(Rat(1), 1); }
  static Coeff constant(Const c, int e = 1) {
    Coeff out = one();
    out.exp[static_cast<int>(c)] = static_cast<int16_t>(e);
    out.reduce_sqrt2();
    out.normalize();
    return out;
  }

  bool is_zero() const { return rat == 0; }

  void normalize() {
    if (rat == 0) {
      ipow = 0;
      exp.fill(0);
      return;
    }
    ipow = ((ipow % 4) + 4) % 4;
    if (ipow >= 2) {  // i^2 = -1
      rat = -rat;
      ipow -= 2;
    }
  }

  // sqrt2^k: fold k = 2q + r with r in {0,1}
  void reduce_sqrt2() {
    int k = exp[static_cast<int>(Const::Sqrt2)];
    int r = ((k % 2) + 2) % 2;
    int q = (k - r) / 2;
    if (q != 0) rat *= pow_rat(Rat(2), q);
    exp[static_cast<int>(Const::Sqrt2)] = static_cast<int16_t>(r);
  }

  Coeff operator*(const Coeff& o) const {
    Coeff out;
    out.rat = rat * o.rat;
    if (out.rat == 0) return Coeff();
    out.ipow = ipow + o.ipow;
    for (int k = 0; k < kNumConsts; ++k)
      out.exp[k] = static_cast<int16_t>(exp[k] + o.exp[k]);
    out.reduce_sqrt2();
    out.normalize();
    return out;
  }

  Coeff operator*(const Rat& r) const {
    Coeff out = *this;
    out.rat *= r;
    if (out.rat == 0) return Coeff();
    return out;
  }

  Coeff operator-() const {
    Coeff out = *this;
    out.rat = -out.rat;
    return out;
  }

  // Valid only when signatures (ipow + exponents) match; callers merge terms
  // keyed on the signature.
  Coeff add_same_sig(const Coeff& o) const {
    Coeff out = *this;
    out.rat += o.rat;
    if (out.rat == 0) return Coeff();
    return out;
  }

  Coeff conj() const {
    Coeff out = *this;
    if (out.ipow == 1) out.rat = -out.rat;  // conj(i) = -i = i^3 -> -1 * i
    return out;
  }

  Coeff inv() const {
    assert(rat != 0);
    Coeff out;
    out.rat = 1 / rat;
    out.ipow = (4 - ipow) & 3;
    for (int k = 0; k < kNumConsts; ++k) out.exp[k] = static_cast<int16_t>(-exp[k]);
    out.reduce_sqrt2();
    out.normalize();
    return out;
  }

  bool same_sig(const Coeff& o) const { return ipow == o.ipow && exp == o.exp; }

  auto key() const { return std::tie(ipow, exp); }

  bool operator==(const Coeff& o) const {
    return rat == o.rat && ipow == o.ipow && exp == o.exp;
  }
};

}  // namespace fw
