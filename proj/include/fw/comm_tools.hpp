#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include "fw/expr.hpp"

namespace fw {

// Commutators with function factors R(eps) never close in finitely many
// terms; they expand as graded series that a truncation policy cuts off.

struct SeriesDivergence : std::runtime_error {
  explicit SeriesDivergence(const std::string& what) : std::runtime_error(what) {}
};

struct SeriesNotRequested : std::logic_error {
  SeriesNotRequested()
      : std::logic_error(
            "a function commutator arose with no truncation cap in effect") {}
};

inline int min_term_grade(const Expr& e) {
  int g = 1 << 20;
  for (const auto& t : e.t) g = std::min(g, term_grade(t));
  return g;
}

// Derivation ad_Z(x) = [Z, x], applied factor by factor. Functions of the
// same core commute with Z exactly; every other factor commutes up to the
// engine's polynomial commutator.
inline Expr ad_core(int core, const Expr& x) {
  const Expr& z = core_info(core).z;
  std::vector<Term> out;
  for (const Term& t : x.t) {
    for (size_t i = 0; i < t.w.size(); ++i) {
      if (const auto* fr = std::get_if<FuncRat>(&t.w[i])) {
        if (fr->core != core)
          throw std::logic_error("ad_core: mixed function cores");
        continue;
      }
      Expr c = comm(z, Expr{{Term{Coeff::one(), {t.w[i]}}}});
      for (const Term& ct : c.t) {
        Term n;
        n.c = t.c * ct.c;
        n.w.assign(t.w.begin(), t.w.begin() + i);
        n.w.insert(n.w.end(), ct.w.begin(), ct.w.end());
        n.w.insert(n.w.end(), t.w.begin() + i + 1, t.w.end());
        out.push_back(std::move(n));
      }
    }
  }
  return make_expr(std::move(out));
}

// [R(eps), T] = sum_{k>=1} (1/k!) ad_Z^k(T) R^(k)(Z), with the derivatives
// taken in Z and multiplied from the right. Exact for polynomial R (the
// series stops when R^(k) vanishes); otherwise truncated by the policy, with
// the minimum grade required to rise at every step.
inline Expr comm_func(const FuncRat& f, const Expr& t, const Policy& pol,
                      int cap = 16, int* order_out = nullptr) {
  if (!pol.bounded() && !funcrat_is_z_polynomial(f)) throw SeriesNotRequested();
  Expr acc = expr_zero();
  Expr adk = t;
  FuncRat fk = f;
  Coeff ck = Coeff::one();
  Rat fact = 1;
  int prev = -1;
  for (int k = 1; k <= cap; ++k) {
    auto [dc, df] = funcrat_dz(fk);
    ck = ck * dc;
    fk = df;
    if (ck.is_zero()) {  // polynomial in Z: the series terminated exactly
      if (order_out) *order_out = k - 1;
      return acc;
    }
    adk = ad_core(f.core, adk);
    if (pol.bounded()) adk = truncate(adk, pol);
    if (adk.is_zero()) {
      if (order_out) *order_out = k - 1;
      return acc;
    }
    int g = min_term_grade(adk);
    if (g <= prev)
      throw SeriesDivergence("commutator series fails to raise the grade");
    prev = g;
    fact *= k;
    Coeff w = ck;
    w.rat /= fact;
    acc = acc + adk * (expr_coeff(w) * expr_func(fk));
  }
  throw SeriesDivergence("commutator series still active at the iteration cap");
}

namespace detail {

inline Expr factor_expr(const Factor& f) {
  return Expr{{Term{Coeff::one(), {f}}}};
}

inline Expr atomic_comm(const Factor& x, const Factor& y, const Policy& pol,
                        int cap) {
  const auto* fx = std::get_if<FuncRat>(&x);
  const auto* fy = std::get_if<FuncRat>(&y);
  if (fx && fy) {
    if (fx->core != fy->core)
      throw std::logic_error("commutator of functions over different cores");
    return expr_zero();
  }
  if (fx) return comm_func(*fx, factor_expr(y), pol, cap);
  if (fy) return -comm_func(*fy, factor_expr(x), pol, cap);
  return comm(factor_expr(x), factor_expr(y));
}

}  // namespace detail

// Full commutator with function factors resolved: double Leibniz down to
// atomic factor pairs,
//   [a1..an, b1..bm] = sum_ij (a<i)(b<j) [ai, bj] (b>j)(a>i).
// Exact whenever no function factor meets a non-function factor.
inline Expr comm_expanded(const Expr& a, const Expr& b, const Policy& pol = {},
                          int cap = 16) {
  Expr out = expr_zero();
  for (const Term& ta : a.t)
    for (const Term& tb : b.t)
      for (size_t i = 0; i < ta.w.size(); ++i)
        for (size_t j = 0; j < tb.w.size(); ++j) {
          Expr c = detail::atomic_comm(ta.w[i], tb.w[j], pol, cap);
          if (c.is_zero()) continue;
          Term pre{ta.c * tb.c, {}};
          pre.w.assign(ta.w.begin(), ta.w.begin() + i);
          pre.w.insert(pre.w.end(), tb.w.begin(), tb.w.begin() + j);
          Term suf{Coeff::one(), {}};
          suf.w.assign(tb.w.begin() + j + 1, tb.w.end());
          suf.w.insert(suf.w.end(), ta.w.begin() + i + 1, ta.w.end());
          out = out + make_expr({pre}) * c * make_expr({suf});
        }
  return out;
}

inline Expr acomm_expanded(const Expr& a, const Expr& b, const Policy& pol = {},
                           int cap = 16) {
  return comm_expanded(a, b, pol, cap) + b * a * expr_rat(2);
}

// [A^-1, B] = A^-1 [B, A] A^-1 for an invertible single function factor A
inline Expr inv_commutator(const Expr& a, const Expr& b, const Policy& pol = {},
                           int cap = 16) {
  if (a.t.size() != 1 || a.t[0].w.size() != 1 ||
      !std::holds_alternative<FuncRat>(a.t[0].w[0]))
    throw std::logic_error("inv_commutator needs a single function factor");
  const FuncRat& f = std::get<FuncRat>(a.t[0].w[0]);
  auto finv = funcrat_inv(f);
  if (!finv) throw std::logic_error("function factor is not invertible");
  Expr ainv = expr_coeff(a.t[0].c.inv()) * expr_func(*finv);
  return ainv * comm_expanded(b, a, pol, cap) * ainv;
}

namespace detail {

// n-th successive approximation of [eps, Y] by the quarter identity:
//   T_n(Y) = (1/4){eps^-1, [Z, Y]} - (1/4)[T_(n-1)(T_(n-1)(Y)), eps^-1]
// The substituted term carries two extra grades, so T_n stabilizes under a
// bounded policy.
inline Expr sqrt_comm_level(int core, const Expr& y, const Policy& pol,
                            int level) {
  if (level <= 0) return expr_zero();
  Expr adz = truncate(ad_core(core, y), pol);
  if (adz.is_zero()) return expr_zero();
  Expr einv = expr_eps(core, -1);
  Expr lead = expr_rat(rat(1, 4)) * acomm(einv, adz);
  Expr inner = sqrt_comm_level(
      core, sqrt_comm_level(core, y, pol, level - 1), pol, level - 1);
  Expr tail = comm_expanded(inner, einv, pol);
  return truncate(lead - expr_rat(rat(1, 4)) * tail, pol);
}

}  // namespace detail

// [eps, B] through the quarter identity
//   [A, B] = (1/4){A^-1, [A^2, B]} - (1/4)[[A, [A, B]], A^-1]
// iterated to a fixed point of the truncation. Cross-checks the direct
// series of comm_func.
inline Expr sqrt_commutator(int core, const Expr& b, const Policy& pol,
                            int cap = 12) {
  if (!pol.bounded()) throw SeriesNotRequested();
  Expr prev = detail::sqrt_comm_level(core, b, pol, 1);
  for (int n = 2; n <= cap; ++n) {
    Expr cur = detail::sqrt_comm_level(core, b, pol, n);
    if (cur == prev) return cur;
    prev = std::move(cur);
  }
  throw SeriesDivergence("sqrt commutator still active at the recursion cap");
}

// product-rule time derivative; function factors differentiate through
// dR/dt = i [R, i d/dt], expanded to policy order
inline Expr time_derivative_full(const Expr& e, const Policy& pol, int cap = 16) {
  Expr out = expr_zero();
  for (const Term& t : e.t) {
    for (size_t i = 0; i < t.w.size(); ++i) {
      Expr piece;
      if (const auto* fr = std::get_if<FuncRat>(&t.w[i]))
        piece = expr_i() * comm_func(*fr, expr_timed(), pol, cap);
      else
        piece = time_derivative(detail::factor_expr(t.w[i]));
      if (piece.is_zero()) continue;
      Term pre{t.c, {}};
      pre.w.assign(t.w.begin(), t.w.begin() + i);
      Term suf{Coeff::one(), {}};
      suf.w.assign(t.w.begin() + i + 1, t.w.end());
      out = out + make_expr({pre}) * piece * make_expr({suf});
    }
  }
  return out;
}

// ---- expansions of functions of the energy ---------------------------------

enum class ExpandMode { weak_field, inverse_mass };

struct WeakCore {
  int core0;  // field-free part of the core
  Expr v;     // field-dependent remainder, Z = Z0 + V
};

inline WeakCore weak_split_core(int core) {
  const CoreInfo& info = core_info(core);
  Expr z0, v;
  for (const Term& t : info.z.t) {
    TermCounts c = term_counts(t);
    (c.pot + c.str + c.weak == 0 ? z0 : v).t.push_back(t);
  }
  if (v.is_zero()) return {core, expr_zero()};
  return {register_core(z0, info.name + "'"), v};
}

// weak field: R(eps) = R(eps') + (1/2){dR/dZ(eps'), V} up to V^2 terms
inline Expr expand_weak(const Coeff& c, const FuncRat& f) {
  WeakCore ws = weak_split_core(f.core);
  FuncRat f0 = f;
  f0.core = ws.core0;
  Expr head = expr_coeff(c) * expr_func(f0);
  if (ws.v.is_zero()) return head;
  auto [dc, df] = funcrat_dz(f0);
  Coeff half = c * dc;
  half.rat /= 2;
  return head + expr_coeff(half) * acomm(expr_func(df), ws.v);
}

// inverse mass: R = sum_k c_k Z^k with Z = eps^2 - m^2, down to m^(-mass)
inline Expr expand_inverse_mass(const Coeff& c, const FuncRat& f,
                                const Policy& pol) {
  if (pol.mass >= Policy::kNoCap) throw SeriesNotRequested();
  const Expr& z = core_info(f.core).z;
  for (const Term& t : z.t)
    assert(t.c.exp[static_cast<int>(Const::M)] == 0 &&
           "inverse-mass expansion needs a mass-free core");
  int mc = c.exp[static_cast<int>(Const::M)];
  int top = 0;
  for (const auto& [ab, r] : f.num.t) {
    (void)r;
    top = std::max(top, ab.first + ab.second);
  }
  // coefficient m power at order k is at most top - (p+q)/2 - 2k + mc
  int kmax = std::max(0, (top - (f.p + f.q) / 2 + pol.mass + mc) / 2 + 1);
  Expr out = expr_zero();
  Expr zk = expr_one();
  auto series = funcrat_series_in_z(f, kmax);
  for (int k = 0; k <= kmax; ++k) {
    for (const auto& [kk, co] : series)
      if (kk == k && co.exp[static_cast<int>(Const::M)] + mc >= -pol.mass)
        out = out + expr_coeff(c * co) * zk;
    if (k < kmax) zk = zk * z;
  }
  return truncate(out, pol);
}

// expand every function factor of an expression in place
inline Expr expand_funcs(const Expr& e, ExpandMode mode, const Policy& pol) {
  Expr out = expr_zero();
  for (const Term& t : e.t) {
    Expr acc = expr_coeff(t.c);
    for (const Factor& f : t.w) {
      if (const auto* fr = std::get_if<FuncRat>(&f)) {
        Expr ex = mode == ExpandMode::weak_field
                      ? expand_weak(Coeff::one(), *fr)
                      : expand_inverse_mass(Coeff::one(), *fr, pol);
        acc = acc * ex;
      } else {
        acc = acc * detail::factor_expr(f);
      }
    }
    out = out + acc;
  }
  return truncate(out, pol);
}

}  // namespace fw
