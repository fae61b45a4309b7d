#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "fw/rational.hpp"
#include "fw/scalar.hpp"

namespace fw {

// Scalar functions of an energy operator eps = sqrt(m^2 + Z), where the
// radicand core Z is tracked elsewhere by id. Everything the transforms need
// lives in the field Q(eps, m, sqrt(eps(eps+m))):
//
//     R = N(eps, m) / (eps^(p/2) (eps+m)^(q/2)),   N in Q[eps,m], p,q in Z.
//
// Canonical form: N has no eps factor, no (eps+m) factor, and unit content
// (the extracted rational * m^k multiplier is returned as a Coeff). Two
// values with the same (p+q) parity share the sqrt(eps(eps+m)) sector and
// can be added; opposite parities live in different sectors and never merge.

struct Poly2 {
  // (eps power, m power) -> coefficient
  std::map<std::pair<int, int>, Rat> t;

  static Poly2 constant(const Rat& c) {
    Poly2 p;
    if (c != 0) p.t[{0, 0}] = c;
    return p;
  }
  static Poly2 eps(int k = 1) {
    Poly2 p;
    p.t[{k, 0}] = 1;
    return p;
  }
  static Poly2 mvar(int k = 1) {
    Poly2 p;
    p.t[{0, k}] = 1;
    return p;
  }
  static Poly2 eps_plus_m() {
    Poly2 p;
    p.t[{1, 0}] = 1;
    p.t[{0, 1}] = 1;
    return p;
  }

  bool is_zero() const { return t.empty(); }
  bool is_one() const {
    return t.size() == 1 && t.begin()->first == std::pair<int, int>{0, 0} &&
           t.begin()->second == 1;
  }

  void prune() {
    for (auto it = t.begin(); it != t.end();)
      it = (it->second == 0) ? t.erase(it) : std::next(it);
  }

  Poly2 operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [k, c] : o.t) r.t[k] += c;
    r.prune();
    return r;
  }
  Poly2 operator-(const Poly2& o) const {
    Poly2 r = *this;
    for (const auto& [k, c] : o.t) r.t[k] -= c;
    r.prune();
    return r;
  }
  Poly2 operator*(const Poly2& o) const {
    Poly2 r;
    for (const auto& [ka, ca] : t)
      for (const auto& [kb, cb] : o.t)
        r.t[{ka.first + kb.first, ka.second + kb.second}] += ca * cb;
    r.prune();
    return r;
  }
  Poly2 operator*(const Rat& c) const {
    Poly2 r;
    if (c == 0) return r;
    for (const auto& [k, v] : t) r.t[k] = v * c;
    return r;
  }
  bool operator==(const Poly2&) const = default;
  bool operator<(const Poly2& o) const { return t < o.t; }

  int eps_min_power() const {
    int mn = 1 << 20;
    for (const auto& [k, c] : t) {
      (void)c;
      if (k.first < mn) mn = k.first;
    }
    return t.empty() ? 0 : mn;
  }

  Poly2 shift_eps(int d) const {  // multiply by eps^d
    Poly2 r;
    for (const auto& [k, c] : t) r.t[{k.first + d, k.second}] = c;
    return r;
  }

  // exact division by (eps+m), viewing N as a polynomial in eps over Q[m]
  std::optional<Poly2> try_divide_eps_plus_m() const {
    if (t.empty()) return Poly2{};
    int deg = 0;
    for (const auto& [k, c] : t) {
      (void)c;
      deg = std::max(deg, k.first);
    }
    // column a: coefficient polynomial in m
    std::vector<std::map<int, Rat>> col(deg + 1), quo(std::max(deg, 1));
    for (const auto& [k, c] : t) col[k.first][k.second] = c;
    std::map<int, Rat> carry;  // current quotient column, from the top down
    for (int a = deg; a >= 1; --a) {
      // quo[a-1] = col[a] - m*quo[a]   (seeded with quo[deg..] = 0)
      std::map<int, Rat> q = col[a];
      for (const auto& [b, c] : carry) q[b + 1] -= c;
      for (auto it = q.begin(); it != q.end();)
        it = (it->second == 0) ? q.erase(it) : std::next(it);
      quo[a - 1] = q;
      carry = q;
    }
    std::map<int, Rat> rem = col[0];
    for (const auto& [b, c] : carry) rem[b + 1] -= c;
    for (auto it = rem.begin(); it != rem.end();)
      it = (it->second == 0) ? rem.erase(it) : std::next(it);
    if (!rem.empty()) return std::nullopt;
    Poly2 out;
    for (int a = 0; a < static_cast<int>(quo.size()); ++a)
      for (const auto& [b, c] : quo[a]) out.t[{a, b}] = c;
    out.prune();
    return out;
  }

  // pull out rational content and the m-monomial common to all terms;
  // leading coefficient (highest eps, then m power) ends up positive
  Coeff extract_content() {
    if (t.empty()) return Coeff::zero();
    int mk = 1 << 20;
    BigInt gnum = 0, lden = 1;
    for (const auto& [k, c] : t) {
      mk = std::min(mk, k.second);
      gnum = gcd(gnum, BigInt(abs(numerator(c))));
      lden = lcm(lden, denominator(c));
    }
    Rat g = Rat(gnum, lden);
    if (t.rbegin()->second < 0) g = -g;
    Poly2 out;
    for (const auto& [k, c] : t) out.t[{k.first, k.second - mk}] = c / g;
    t = out.t;
    Coeff mult = Coeff::constant(Const::M, mk);
    mult.rat *= g;
    return mult;
  }

  Poly2 deriv_eps() const {
    Poly2 r;
    for (const auto& [k, c] : t)
      if (k.first > 0) r.t[{k.first - 1, k.second}] = c * k.first;
    return r;
  }

  double eval(double ev, double mv) const {
    double s = 0;
    for (const auto& [k, c] : t)
      s += rat_double(c) * std::pow(ev, k.first) * std::pow(mv, k.second);
    return s;
  }
};

struct FuncRat {
  int core = 0;
  Poly2 num = Poly2::constant(1);
  int p = 0, q = 0;  // value = num * eps^(-p/2) * (eps+m)^(-q/2)

  static FuncRat one(int core) { return {core, Poly2::constant(1), 0, 0}; }
  static FuncRat eps_power(int core, int k) {
    return {core, Poly2::constant(1), -2 * k, 0};
  }
  static FuncRat eps_plus_m_power(int core, int k) {
    return {core, Poly2::constant(1), 0, -2 * k};
  }

  bool is_one() const { return num.is_one() && p == 0 && q == 0; }
  int parity() const { return ((p + q) % 2 + 2) % 2; }

  auto key() const { return std::tie(core, p, q, num.t); }
  bool operator==(const FuncRat&) const = default;
  bool operator<(const FuncRat& o) const { return key() < o.key(); }

  // reduce to canonical form, returning the extracted scalar multiplier
  Coeff canonicalize() {
    if (num.is_zero()) {
      *this = one(core);
      return Coeff::zero();
    }
    int a = num.eps_min_power();
    if (a > 0) {
      num = num.shift_eps(-a);
      p -= 2 * a;
    }
    while (true) {
      auto d = num.try_divide_eps_plus_m();
      if (!d) break;
      num = *d;
      q -= 2;
    }
    return num.extract_content();
  }
};

// product of two functions of the same core; canonicalize afterwards
inline FuncRat funcrat_mul(const FuncRat& a, const FuncRat& b) {
  assert(a.core == b.core);
  return {a.core, a.num * b.num, a.p + b.p, a.q + b.q};
}

// Merge c1*f1 + c2*f2 into a single c*f. Works within one core and one
// sqrt sector; the scalar parts may differ only in their rational and
// m-power factors (those fold into the numerator polynomial).
inline std::optional<std::pair<Coeff, FuncRat>> funcrat_merge(const Coeff& c1,
                                                              const FuncRat& f1,
                                                              const Coeff& c2,
                                                              const FuncRat& f2) {
  if (f1.core != f2.core) return std::nullopt;
  if (((f1.p - f2.p) & 1) || ((f1.q - f2.q) & 1)) return std::nullopt;
  if (c1.ipow != c2.ipow) return std::nullopt;
  constexpr int kM = static_cast<int>(Const::M);
  for (int k = 0; k < kNumConsts; ++k)
    if (k != kM && c1.exp[k] != c2.exp[k]) return std::nullopt;
  int m1 = c1.exp[kM], m2 = c2.exp[kM];
  int mk = std::min(m1, m2);
  int P = std::max(f1.p, f2.p), Q = std::max(f1.q, f2.q);
  auto lift = [&](const FuncRat& f, const Rat& r, int dm) {
    Poly2 n = f.num.shift_eps((P - f.p) / 2) * r;
    n = n * Poly2::mvar(dm);
    for (int k = 0; k < (Q - f.q) / 2; ++k) n = n * Poly2::eps_plus_m();
    return n;
  };
  FuncRat out{f1.core, lift(f1, c1.rat, m1 - mk) + lift(f2, c2.rat, m2 - mk), P, Q};
  Coeff base = c1;
  base.rat = 1;
  base.exp[kM] = static_cast<int16_t>(mk);
  Coeff c = base * out.canonicalize();
  return std::make_pair(c, out);
}

// Reciprocal and square root close only on denominator monomials (numerator 1
// once canonical); that covers every function the transforms construct.
inline std::optional<FuncRat> funcrat_inv(const FuncRat& f) {
  if (!f.num.is_one()) return std::nullopt;
  return FuncRat{f.core, Poly2::constant(1), -f.p, -f.q};
}

inline std::optional<FuncRat> funcrat_sqrt(const FuncRat& f) {
  if (!f.num.is_one()) return std::nullopt;
  if ((f.p & 1) || (f.q & 1)) return std::nullopt;
  return FuncRat{f.core, Poly2::constant(1), f.p / 2, f.q / 2};
}

inline double funcrat_eval(const FuncRat& f, double ev, double mv) {
  return f.num.eval(ev, mv) * std::pow(ev, -0.5 * f.p) *
         std::pow(ev + mv, -0.5 * f.q);
}

// true when the function is a polynomial in Z = eps^2 - m^2 (equivalently,
// in eps^2), so that operations on it close after finitely many derivatives
inline bool funcrat_is_z_polynomial(const FuncRat& f) {
  if (f.q != 0 || f.p > 0 || (f.p & 1)) return false;
  for (const auto& [ab, c] : f.num.t) {
    (void)c;
    if ((ab.first - f.p / 2) & 1) return false;
  }
  return true;
}

// derivative with respect to Z, where eps = sqrt(m^2 + Z): the chain rule
// factor 1/(2 eps) keeps the result inside the same field (and sqrt sector)
inline std::pair<Coeff, FuncRat> funcrat_dz(const FuncRat& f) {
  Poly2 n = f.num.deriv_eps() * Poly2::eps() * Poly2::eps_plus_m() * rat(2) -
            f.num * Poly2::eps_plus_m() * rat(f.p) - f.num * Poly2::eps() * rat(f.q);
  FuncRat g{f.core, n, f.p + 4, f.q + 2};
  Coeff c = g.canonicalize();
  c.rat /= 4;
  return {c, g};
}

// Power series in Z = eps^2 - m^2 around Z = 0 (the inverse-mass expansion):
// returns (k, coeff) pairs such that R = sum coeff * Z^k + O(Z^(zmax+1)).
// Coefficients carry integer m powers, so (p+q) must be even.
inline std::vector<std::pair<int, Coeff>> funcrat_series_in_z(const FuncRat& f,
                                                              int zmax) {
  assert(((f.p + f.q) & 1) == 0);
  int K = zmax;
  using Ser = std::vector<Rat>;
  auto binom_series = [&](const Rat& r) {
    Ser s(K + 1);
    for (int j = 0; j <= K; ++j) s[j] = binom_rat(r, j);
    return s;
  };
  auto mul_ser = [&](const Ser& x, const Ser& y) {
    Ser s(K + 1, Rat(0));
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) s[i + j] += x[i] * y[j];
    return s;
  };
  // v = (sqrt(1+u) - 1)/2, no constant term
  Ser sq = binom_series(rat(1, 2));
  Ser v(K + 1, Rat(0));
  for (int j = 1; j <= K; ++j) v[j] = sq[j] / 2;
  auto pow_one_plus = [&](const Ser& w, const Rat& r) {
    // (1+w)^r with w free of constant term: sum_j binom(r,j) w^j
    Ser acc(K + 1, Rat(0)), wj(K + 1, Rat(0));
    wj[0] = 1;
    for (int j = 0; j <= K; ++j) {
      for (int k = 0; k <= K; ++k) acc[k] += binom_rat(r, j) * wj[k];
      if (j < K) wj = mul_ser(wj, w);
    }
    return acc;
  };
  Ser epm = pow_one_plus(v, rat(-f.q, 2));  // (1+v)^(-q/2)
  std::map<std::pair<int, int>, Rat> out;   // (k, m exponent) -> rat
  for (const auto& [ab, c] : f.num.t) {
    auto [a, b] = ab;
    Ser ea = binom_series(rat(2 * a - f.p, 4));  // (1+u)^((2a-p)/4)
    Ser tot = mul_ser(ea, epm);
    int mexp = a + b - (f.p + f.q) / 2;
    for (int k = 0; k <= K; ++k) {
      if (tot[k] == 0) continue;
      out[{k, mexp - 2 * k}] += c * tot[k];
    }
  }
  std::vector<std::pair<int, Coeff>> res;
  for (const auto& [km, c] : out) {
    if (c == 0) continue;
    Coeff co = Coeff::constant(Const::Sqrt2, -f.q);
    co.rat *= c;
    co = co * Coeff::constant(Const::M, km.second);
    res.emplace_back(km.first, co);
  }
  return res;
}

}  // namespace fw
