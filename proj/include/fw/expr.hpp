#pragma once

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fw/basis.hpp"
#include "fw/funcrat.hpp"
#include "fw/jets.hpp"
#include "fw/scalar.hpp"

namespace fw {

// Operator words. A term is a scalar coefficient times an ordered product of
// factors; an expression is a merged, sorted list of terms. Canonicalization
// normal-orders each word, emitting the commutator corrections this algebra
// is really about:
//   [pi_i, pi_j] = i e eps_ijk B_k        [p_i, p_j] = 0
//   [pi_a, p_b]  = -i e (d_b A_a)         [mom, jet] = -i (d jet)
//   [i dt, jet]  = i (dt jet)             [i dt, pi_a] = -i e (dt A_a)
// Functions of an energy core are opaque factors: nothing moves across them
// unless it provably commutes (Dirac matrices against a matrix-free core).

struct Mom {
  uint8_t kind = 1;  // 0 = canonical p, 1 = kinetic pi
  uint8_t axis = 1;  // 1..3
  bool operator==(const Mom&) const = default;
  auto key() const { return std::tie(kind, axis); }
  bool operator<(const Mom& o) const { return key() < o.key(); }
};

struct TimeD {  // the operator i d/dt
  bool operator==(const TimeD&) const { return true; }
  bool operator<(const TimeD&) const { return false; }
};

inline bool operator<(const MatElem& a, const MatElem& b) {
  return a.key() < b.key();
}

using Factor = std::variant<MatElem, FuncRat, Jet, Mom, TimeD>;

struct Term {
  Coeff c;
  std::vector<Factor> w;
  bool operator==(const Term&) const = default;
};

inline bool word_less(const std::vector<Factor>& a, const std::vector<Factor>& b) {
  return a < b;
}

struct Expr {
  std::vector<Term> t;  // canonical: each word normal-ordered, terms sorted

  bool is_zero() const { return t.empty(); }
  bool operator==(const Expr&) const = default;

  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr operator*(const Coeff& c) const;
  Expr operator*(const Rat& r) const;
  Expr operator-() const { return *this * rat(-1); }
};

// ---- energy cores ---------------------------------------------------------
// eps = sqrt(m^2 + Z) for a registered radicand Z (a polynomial expression).
// FuncRat factors refer to cores by id.

struct CoreInfo {
  Expr z;
  std::string name;
  std::vector<MatElem> elems;  // distinct matrix factors appearing in z
};

inline std::vector<CoreInfo>& core_registry() {
  static std::vector<CoreInfo> r;
  return r;
}

inline const CoreInfo& core_info(int id) { return core_registry().at(id); }

inline bool core_commutes_mat(int id, MatElem e) {
  for (const auto& s : core_info(id).elems)
    if (!mat_commute(e, s)) return false;
  return true;
}

inline int register_core(const Expr& z, const std::string& name) {
  auto& reg = core_registry();
  for (int i = 0; i < static_cast<int>(reg.size()); ++i)
    if (reg[i].z == z) return i;
  CoreInfo info;
  info.z = z;
  info.name = name;
  for (const auto& term : z.t)
    for (const auto& f : term.w)
      if (std::holds_alternative<MatElem>(f)) {
        MatElem e = std::get<MatElem>(f);
        assert(beta_parity(e) == 1 && "energy cores must be even operators");
        if (std::find(info.elems.begin(), info.elems.end(), e) == info.elems.end())
          info.elems.push_back(e);
      } else if (std::holds_alternative<FuncRat>(f)) {
        assert(false && "energy cores must be polynomial");
      }
  reg.push_back(std::move(info));
  return static_cast<int>(reg.size()) - 1;
}

// ---- canonicalization -----------------------------------------------------

namespace detail {

inline bool commutes_with_mat(const Factor& f, MatElem e) {
  if (std::holds_alternative<FuncRat>(f))
    return core_commutes_mat(std::get<FuncRat>(f).core, e);
  return !std::holds_alternative<MatElem>(f);
}

// normal-order one term, appending the canonical pieces to `done`
inline void canon_term(Term seed, std::vector<Term>& done) {
  std::vector<Term> work{std::move(seed)};
  while (!work.empty()) {
    Term cur = std::move(work.back());
    work.pop_back();
    if (cur.c.is_zero()) continue;

    bool changed = false;
    auto& w = cur.w;

    // unary: drop unit function factors and identity matrices
    for (size_t i = 0; i < w.size(); ++i) {
      bool unit =
          (std::holds_alternative<FuncRat>(w[i]) && std::get<FuncRat>(w[i]).is_one()) ||
          (std::holds_alternative<MatElem>(w[i]) && std::get<MatElem>(w[i]).is_identity());
      if (unit) {
        w.erase(w.begin() + i);
        changed = true;
        break;
      }
    }
    if (changed) {
      work.push_back(std::move(cur));
      continue;
    }

    // replace the pair at i by a jet sum scaled by mult
    auto emit_jets = [&](size_t i, const Coeff& mult, const JetSum& js) {
      for (const auto& [r, j] : js) {
        Term n = cur;
        n.c = n.c * mult * r;
        n.w.erase(n.w.begin() + i, n.w.begin() + i + 2);
        n.w.insert(n.w.begin() + i, Factor(j));
        work.push_back(std::move(n));
      }
    };

    for (size_t i = 0; i + 1 < w.size() && !changed; ++i) {
      Factor &a = w[i], &b = w[i + 1];
      // merge adjacent matrices
      if (std::holds_alternative<MatElem>(a) && std::holds_alternative<MatElem>(b)) {
        MatProd p = mat_mul(std::get<MatElem>(a), std::get<MatElem>(b));
        cur.c = cur.c * Coeff(Rat(1), p.iphase);
        w.erase(w.begin() + i, w.begin() + i + 2);
        if (!p.elem.is_identity()) w.insert(w.begin() + i, Factor(p.elem));
        changed = true;
        break;
      }
      // merge adjacent same-core functions
      if (std::holds_alternative<FuncRat>(a) && std::holds_alternative<FuncRat>(b) &&
          std::get<FuncRat>(a).core == std::get<FuncRat>(b).core) {
        FuncRat f = funcrat_mul(std::get<FuncRat>(a), std::get<FuncRat>(b));
        cur.c = cur.c * f.canonicalize();
        w.erase(w.begin() + i, w.begin() + i + 2);
        if (!f.is_one()) w.insert(w.begin() + i, Factor(std::move(f)));
        changed = true;
        break;
      }
      // bubble matrices leftward across anything that commutes with them
      if (std::holds_alternative<MatElem>(b) && !std::holds_alternative<MatElem>(a) &&
          commutes_with_mat(a, std::get<MatElem>(b))) {
        std::swap(a, b);
        changed = true;
        break;
      }
      // sort commuting jets
      if (std::holds_alternative<Jet>(a) && std::holds_alternative<Jet>(b) &&
          std::get<Jet>(b) < std::get<Jet>(a)) {
        std::swap(a, b);
        changed = true;
        break;
      }
      // move momenta right of jets: mom jet = jet mom - i (d jet)
      if (std::holds_alternative<Mom>(a) && std::holds_alternative<Jet>(b)) {
        Mom mv = std::get<Mom>(a);
        Jet jv = std::get<Jet>(b);
        std::swap(a, b);
        changed = true;
        emit_jets(i, -Coeff::imag(), d_space(jv, mv.axis));
        break;
      }
      // sort momenta, emitting field-strength corrections
      if (std::holds_alternative<Mom>(a) && std::holds_alternative<Mom>(b) &&
          std::get<Mom>(b) < std::get<Mom>(a)) {
        Mom ma = std::get<Mom>(a), mb = std::get<Mom>(b);
        std::swap(a, b);
        changed = true;
        if (ma.kind == 1 && mb.kind == 1) {
          // [pi_i, pi_j] = i e eps_ijk B_k
          static constexpr int eps[3][3][3] = {
              {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
              {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
              {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
          for (int k = 0; k < 3; ++k) {
            int s = eps[ma.axis - 1][mb.axis - 1][k];
            if (s == 0) continue;
            emit_jets(i, Coeff::imag() * Coeff::constant(Const::E) * rat(s),
                      make_jet(Family::B, k + 1, {}, 0));
          }
        } else if (ma.kind == 1 && mb.kind == 0) {
          // [pi_a, p_b] = -i e (d_b A_a)
          std::array<uint8_t, 3> sd{};
          sd[mb.axis - 1] = 1;
          emit_jets(i, -(Coeff::imag() * Coeff::constant(Const::E)),
                    make_jet(Family::A, ma.axis, sd, 0));
        }
        // p past p, or p already left of pi: no correction
        break;
      }
      // push i d/dt to the right
      if (std::holds_alternative<TimeD>(a) &&
          (std::holds_alternative<Jet>(b) || std::holds_alternative<Mom>(b))) {
        if (std::holds_alternative<Jet>(b)) {
          Jet jv = std::get<Jet>(b);
          std::swap(a, b);
          changed = true;
          emit_jets(i, Coeff::imag(), d_time(jv));
        } else {
          Mom mv = std::get<Mom>(b);
          std::swap(a, b);
          changed = true;
          if (mv.kind == 1)
            emit_jets(i, -(Coeff::imag() * Coeff::constant(Const::E)),
                      make_jet(Family::A, mv.axis, {}, 1));
        }
        break;
      }
    }

    if (changed)
      work.push_back(std::move(cur));
    else
      done.push_back(std::move(cur));
  }
}

inline bool term_order(const Term& a, const Term& b) {
  if (a.w != b.w) return a.w < b.w;
  return a.c.key() < b.c.key();
}

// try to merge term b into a (same word, or words differing in one function
// slot); returns true when absorbed
inline bool try_merge(Term& a, const Term& b) {
  if (a.w.size() != b.w.size()) return false;
  int mismatch = -1;
  for (size_t i = 0; i < a.w.size(); ++i) {
    if (a.w[i] == b.w[i]) continue;
    if (mismatch >= 0) return false;
    if (!std::holds_alternative<FuncRat>(a.w[i]) ||
        !std::holds_alternative<FuncRat>(b.w[i]))
      return false;
    mismatch = static_cast<int>(i);
  }
  if (mismatch < 0) {
    if (a.c.same_sig(b.c)) {
      a.c = a.c.add_same_sig(b.c);
      return true;
    }
    // same word, scalar parts differing only in m powers: absorb into the
    // first function factor if there is one
    for (size_t i = 0; i < a.w.size(); ++i)
      if (std::holds_alternative<FuncRat>(a.w[i])) {
        auto m = funcrat_merge(a.c, std::get<FuncRat>(a.w[i]), b.c,
                               std::get<FuncRat>(b.w[i]));
        if (!m) return false;
        a.c = m->first;
        a.w[i] = m->second;
        return true;
      }
    return false;
  }
  auto m = funcrat_merge(a.c, std::get<FuncRat>(a.w[mismatch]), b.c,
                         std::get<FuncRat>(b.w[mismatch]));
  if (!m) return false;
  a.c = m->first;
  a.w[mismatch] = m->second;
  return true;
}

// Bucket key under which terms can possibly merge: the word with function
// slots reduced to (core, sqrt-sector), plus the scalar signature without
// its rational and m-power parts (those fold into numerators).
inline std::string merge_key(const Term& t) {
  std::string k;
  auto put = [&k](int v) {
    k.push_back(static_cast<char>(v & 0xff));
    k.push_back(static_cast<char>((v >> 8) & 0xff));
  };
  put(t.c.ipow);
  for (int i = 0; i < kNumConsts; ++i)
    if (i != static_cast<int>(Const::M)) put(t.c.exp[i]);
  for (const auto& f : t.w) {
    put(static_cast<int>(f.index()) << 8);
    if (std::holds_alternative<MatElem>(f)) {
      put(std::get<MatElem>(f).key());
    } else if (std::holds_alternative<FuncRat>(f)) {
      const auto& fr = std::get<FuncRat>(f);
      put(fr.core);
      put(fr.p & 1);
      put(fr.q & 1);
    } else if (std::holds_alternative<Jet>(f)) {
      const auto& j = std::get<Jet>(f);
      put(static_cast<int>(j.fam));
      put(j.comp);
      put(j.sd[0]);
      put(j.sd[1]);
      put(j.sd[2]);
      put(j.td);
    } else if (std::holds_alternative<Mom>(f)) {
      put(std::get<Mom>(f).kind);
      put(std::get<Mom>(f).axis);
    }
  }
  return k;
}

inline std::vector<Term> normalize(std::vector<Term> in) {
  std::vector<Term> flat;
  for (auto& t : in) canon_term(std::move(t), flat);
  // merging can collapse a function slot to 1, which changes the bucket a
  // term belongs to; repeat until stable
  bool again = true;
  while (again) {
    again = false;
    std::map<std::string, std::vector<Term>> buckets;
    for (auto& t : flat) {
      if (t.c.is_zero()) continue;
      auto& bucket = buckets[merge_key(t)];
      bool merged = false;
      for (auto& have : bucket)
        if (try_merge(have, t)) {
          merged = true;
          break;
        }
      if (!merged) bucket.push_back(std::move(t));
    }
    flat.clear();
    for (auto& [k, bucket] : buckets) {
      (void)k;
      for (auto& t : bucket) {
        if (t.c.is_zero()) continue;
        size_t before = t.w.size();
        std::erase_if(t.w, [](const Factor& f) {
          return std::holds_alternative<FuncRat>(f) && std::get<FuncRat>(f).is_one();
        });
        if (t.w.size() != before) again = true;
        flat.push_back(std::move(t));
      }
    }
  }
  std::sort(flat.begin(), flat.end(), term_order);
  return flat;
}

}  // namespace detail

inline Expr make_expr(std::vector<Term> terms) {
  return Expr{detail::normalize(std::move(terms))};
}

inline Expr Expr::operator+(const Expr& o) const {
  std::vector<Term> all = t;
  all.insert(all.end(), o.t.begin(), o.t.end());
  return make_expr(std::move(all));
}

inline Expr Expr::operator-(const Expr& o) const { return *this + (o * rat(-1)); }

inline Expr Expr::operator*(const Expr& o) const {
  std::vector<Term> all;
  for (const auto& ta : t)
    for (const auto& tb : o.t) {
      Term n;
      n.c = ta.c * tb.c;
      n.w = ta.w;
      n.w.insert(n.w.end(), tb.w.begin(), tb.w.end());
      all.push_back(std::move(n));
    }
  return make_expr(std::move(all));
}

inline Expr Expr::operator*(const Coeff& c) const {
  std::vector<Term> all = t;
  for (auto& term : all) term.c = term.c * c;
  return make_expr(std::move(all));
}

inline Expr Expr::operator*(const Rat& r) const {
  if (r == 0) return Expr{};
  std::vector<Term> all = t;
  for (auto& term : all) term.c = term.c * r;
  return Expr{std::move(all)};  // scaling keeps canonical form
}

// ---- constructors ---------------------------------------------------------

inline Expr expr_zero() { return Expr{}; }

inline Expr expr_coeff(const Coeff& c) {
  if (c.is_zero()) return Expr{};
  return Expr{{Term{c, {}}}};
}

inline Expr expr_one() { return expr_coeff(Coeff::one()); }
inline Expr expr_rat(const Rat& r) { return expr_coeff(Coeff::one() * r); }
inline Expr expr_i() { return expr_coeff(Coeff::imag()); }
inline Expr expr_const(Const k, int e = 1) { return expr_coeff(Coeff::constant(k, e)); }

inline Expr expr_mat(MatAlias a) {
  return Expr{{Term{Coeff(Rat(1), a.iphase), {Factor(a.elem)}}}};
}

inline Expr expr_jets(const JetSum& js) {
  std::vector<Term> ts;
  for (const auto& [r, j] : js) ts.push_back(Term{Coeff::one() * r, {Factor(j)}});
  return make_expr(std::move(ts));
}

inline Expr expr_jet(Family f, int comp, std::array<uint8_t, 3> sd = {}, int td = 0) {
  return expr_jets(make_jet(f, comp, sd, td));
}

inline Expr expr_mom(int kind, int axis) {
  return Expr{{Term{Coeff::one(),
                    {Factor(Mom{static_cast<uint8_t>(kind), static_cast<uint8_t>(axis)})}}}};
}

inline Expr expr_pi(int axis) { return expr_mom(1, axis); }
inline Expr expr_p(int axis) { return expr_mom(0, axis); }
inline Expr expr_timed() { return Expr{{Term{Coeff::one(), {Factor(TimeD{})}}}}; }

inline Expr expr_func(FuncRat f) {
  Coeff c = f.canonicalize();
  if (c.is_zero()) return Expr{};
  if (f.is_one()) return expr_coeff(c);
  return Expr{{Term{c, {Factor(std::move(f))}}}};
}

inline Expr expr_eps(int core, int power = 1) {
  return expr_func(FuncRat::eps_power(core, power));
}

// ---- algebra helpers ------------------------------------------------------

inline Expr comm(const Expr& a, const Expr& b) { return a * b - b * a; }
inline Expr acomm(const Expr& a, const Expr& b) { return a * b + b * a; }

inline Expr expr_pow(const Expr& a, int n) {
  assert(n >= 0);
  Expr r = expr_one();
  for (int k = 0; k < n; ++k) r = r * a;
  return r;
}

inline Expr adjoint(const Expr& e) {
  std::vector<Term> out;
  for (const auto& t : e.t) {
    Term n;
    n.c = t.c.conj();
    for (auto it = t.w.rbegin(); it != t.w.rend(); ++it) {
      if (std::holds_alternative<MatElem>(*it)) {
        MatElem m = std::get<MatElem>(*it);
        n.c = n.c * Coeff(Rat(1), mat_adjoint_iphase(m));
        n.w.push_back(Factor(m));
      } else {
        n.w.push_back(*it);  // jets, momenta, i d/dt, R(eps): all Hermitian
      }
    }
    out.push_back(std::move(n));
  }
  return make_expr(std::move(out));
}

inline bool is_hermitian(const Expr& e) { return adjoint(e) == e; }

// beta-parity split over the matrix content; every non-matrix factor is even
inline int term_parity(const Term& t) {
  int par = 1;
  for (const auto& f : t.w)
    if (std::holds_alternative<MatElem>(f))
      par *= beta_parity(std::get<MatElem>(f));
  return par;
}

inline Expr even_part(const Expr& e) {
  Expr out;
  for (const auto& t : e.t)
    if (term_parity(t) == 1) out.t.push_back(t);
  return out;
}

inline Expr odd_part(const Expr& e) {
  Expr out;
  for (const auto& t : e.t)
    if (term_parity(t) == -1) out.t.push_back(t);
  return out;
}

// ---- structure queries ----------------------------------------------------

struct TermCounts {
  int pot = 0;    // Phi and A jets
  int str = 0;    // E and B jets
  int weak = 0;   // matter density jets
  int deriv = 0;  // derivative indices across all jets
  int moms = 0;
  int timed = 0;
  int funcs = 0;
};

inline TermCounts term_counts(const Term& t) {
  TermCounts c;
  for (const auto& f : t.w) {
    if (std::holds_alternative<Jet>(f)) {
      const Jet& j = std::get<Jet>(f);
      if (j.fam == Family::Phi || j.fam == Family::A) c.pot++;
      else if (j.fam == Family::N) c.weak++;
      else c.str++;
      c.deriv += j.deriv_count();
    } else if (std::holds_alternative<Mom>(f)) {
      c.moms++;
    } else if (std::holds_alternative<TimeD>(f)) {
      c.timed++;
    } else if (std::holds_alternative<FuncRat>(f)) {
      c.funcs++;
    }
  }
  return c;
}

// termination grade: raised by every commutator the rewrites can emit
inline int term_grade(const Term& t) {
  int g = 0;
  for (const auto& f : t.w)
    if (std::holds_alternative<Jet>(f)) g += std::get<Jet>(f).grade();
  return g;
}

struct Policy {
  static constexpr int kNoCap = 1 << 20;

  int pot = kNoCap;
  int str = kNoCap;
  int deriv = kNoCap;
  int weak = kNoCap;
  int mass = kNoCap;  // keep terms down to m^(-mass)

  // any cap that can terminate a commutator series
  bool bounded() const {
    return pot < kNoCap || str < kNoCap || deriv < kNoCap || weak < kNoCap;
  }

  bool keeps(const Term& t) const {
    TermCounts c = term_counts(t);
    return c.pot <= pot && c.str <= str && c.deriv <= deriv && c.weak <= weak &&
           t.c.exp[static_cast<int>(Const::M)] >= -mass;
  }
};

inline Expr truncate(const Expr& e, const Policy& pol) {
  Expr out;
  for (const auto& t : e.t)
    if (pol.keeps(t)) out.t.push_back(t);
  return out;
}

inline bool contains_funcs(const Expr& e) {
  for (const auto& t : e.t)
    for (const auto& f : t.w)
      if (std::holds_alternative<FuncRat>(f)) return true;
  return false;
}

inline bool contains_timed(const Expr& e) {
  for (const auto& t : e.t)
    for (const auto& f : t.w)
      if (std::holds_alternative<TimeD>(f)) return true;
  return false;
}

// ---- substitutions --------------------------------------------------------

inline Expr zero_mom(const Expr& e, int kind, int axis) {
  Expr out;
  for (const auto& t : e.t) {
    bool hit = false;
    for (const auto& f : t.w)
      if (std::holds_alternative<Mom>(f) &&
          std::get<Mom>(f) == Mom{static_cast<uint8_t>(kind), static_cast<uint8_t>(axis)})
        hit = true;
    if (!hit) out.t.push_back(t);
  }
  return out;
}

inline Expr zero_const(const Expr& e, Const k) {
  Expr out;
  for (const auto& t : e.t) {
    int16_t x = t.c.exp[static_cast<int>(k)];
    assert(x >= 0 && "cannot zero a constant appearing inverted");
    if (x == 0) out.t.push_back(t);
  }
  return out;
}

inline Expr zero_family(const Expr& e, Family fam) {
  Expr out;
  for (const auto& t : e.t) {
    bool hit = false;
    for (const auto& f : t.w)
      if (std::holds_alternative<Jet>(f) && std::get<Jet>(f).fam == fam) hit = true;
    if (!hit) out.t.push_back(t);
  }
  return out;
}

// time derivative for polynomial expressions (no function factors)
inline Expr time_derivative(const Expr& e) {
  std::vector<Term> out;
  for (const auto& t : e.t) {
    for (size_t i = 0; i < t.w.size(); ++i) {
      const Factor& f = t.w[i];
      if (std::holds_alternative<Jet>(f)) {
        for (const auto& [r, j] : d_time(std::get<Jet>(f))) {
          Term n = t;
          n.c = n.c * r;
          n.w[i] = Factor(j);
          out.push_back(std::move(n));
        }
      } else if (std::holds_alternative<Mom>(f)) {
        if (std::get<Mom>(f).kind == 1) {
          Term n = t;
          n.c = n.c * -Coeff::constant(Const::E);
          n.w[i] = Factor(Jet{Family::A, std::get<Mom>(f).axis, {}, 1});
          out.push_back(std::move(n));
        }
      } else if (std::holds_alternative<FuncRat>(f)) {
        throw std::logic_error("time_derivative: function factors need the commutator tools");
      }
    }
  }
  return make_expr(std::move(out));
}

// ---- vectors --------------------------------------------------------------

using VectorExpr = std::array<Expr, 3>;

inline VectorExpr pi_vec() { return {expr_pi(1), expr_pi(2), expr_pi(3)}; }
inline VectorExpr p_vec() { return {expr_p(1), expr_p(2), expr_p(3)}; }

inline VectorExpr jet_vec(Family f, std::array<uint8_t, 3> sd = {}, int td = 0) {
  return {expr_jet(f, 1, sd, td), expr_jet(f, 2, sd, td), expr_jet(f, 3, sd, td)};
}

inline VectorExpr mat_vec(MatAlias (*alias)(int)) {
  return {expr_mat(alias(1)), expr_mat(alias(2)), expr_mat(alias(3))};
}

inline Expr dot(const VectorExpr& a, const VectorExpr& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline VectorExpr cross(const VectorExpr& a, const VectorExpr& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

inline VectorExpr operator+(const VectorExpr& a, const VectorExpr& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}

inline VectorExpr operator-(const VectorExpr& a, const VectorExpr& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

inline VectorExpr operator*(const Expr& s, const VectorExpr& v) {
  return {s * v[0], s * v[1], s * v[2]};
}

inline VectorExpr grad(const Expr& s) {
  VectorExpr out;
  for (int ax = 1; ax <= 3; ++ax) {
    std::vector<Term> ts;
    for (const auto& t : s.t)
      for (size_t i = 0; i < t.w.size(); ++i)
        if (std::holds_alternative<Jet>(t.w[i])) {
          for (const auto& [r, j] : d_space(std::get<Jet>(t.w[i]), ax)) {
            Term n = t;
            n.c = n.c * r;
            n.w[i] = Factor(j);
            ts.push_back(std::move(n));
          }
        } else if (std::holds_alternative<Mom>(t.w[i]) ||
                   std::holds_alternative<FuncRat>(t.w[i]) ||
                   std::holds_alternative<TimeD>(t.w[i])) {
          throw std::logic_error("grad: argument must be a field expression");
        }
    out[ax - 1] = make_expr(std::move(ts));
  }
  return out;
}

inline Expr divergence(const VectorExpr& v) {
  return grad(v[0])[0] + grad(v[1])[1] + grad(v[2])[2];
}

inline VectorExpr curl(const VectorExpr& v) {
  return {grad(v[2])[1] - grad(v[1])[2], grad(v[0])[2] - grad(v[2])[0],
          grad(v[1])[0] - grad(v[0])[1]};
}

}  // namespace fw
