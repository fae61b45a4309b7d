#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <string>

namespace fw {

// Matrix sector of a term: one of 16 gamma-matrix monomials tensored with one
// of 4 matter-space Pauli elements. Dirac monomials are indexed by a 4-bit
// mask (bit k = gamma^k present, factors in ascending order), matter by
// 0 = 1, k = sigma'_k. Every product of two basis elements is i^k times a
// basis element; the tables below are computed once from exact
// Gaussian-integer matrices in the standard representation
//   gamma^0 = diag(1,1,-1,-1), gamma^k = [[0, sigma_k], [-sigma_k, 0]].
struct MatElem {
  uint8_t dirac = 0;  // mask over gamma^0..gamma^3
  uint8_t spin = 0;   // 0 or sigma'_1..3

  bool is_identity() const { return dirac == 0 && spin == 0; }
  bool operator==(const MatElem&) const = default;
  auto key() const { return (static_cast<int>(dirac) << 2) | spin; }
};

namespace detail {

struct GInt {  // Gaussian integer
  int re = 0, im = 0;
  GInt operator*(const GInt& o) const {
    return {re * o.re - im * o.im, re * o.im + im * o.re};
  }
  GInt operator+(const GInt& o) const { return {re + o.re, im + o.im}; }
  GInt conj() const { return {re, -im}; }
  bool operator==(const GInt&) const = default;
};

template <std::size_t N>
using GMat = std::array<std::array<GInt, N>, N>;

template <std::size_t N>
GMat<N> gmul(const GMat<N>& a, const GMat<N>& b) {
  GMat<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t k = 0; k < N; ++k) {
      if (a[i][k] == GInt{}) continue;
      for (std::size_t j = 0; j < N; ++j) c[i][j] = c[i][j] + a[i][k] * b[k][j];
    }
  return c;
}

template <std::size_t N>
GMat<N> gdagger(const GMat<N>& a) {
  GMat<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] = a[j][i].conj();
  return c;
}

// i^k * a
template <std::size_t N>
GMat<N> gphase(const GMat<N>& a, int k) {
  static constexpr GInt ph[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  GMat<N> c{};
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) c[i][j] = a[i][j] * ph[k & 3];
  return c;
}

struct BasisTables {
  std::array<GMat<4>, 16> dirac;  // monomial matrices by mask
  std::array<GMat<2>, 4> pauli;   // 1, sigma_1..3
  // products: result index and i^k phase
  std::array<std::array<uint8_t, 16>, 16> dmul_idx{};
  std::array<std::array<uint8_t, 16>, 16> dmul_ph{};
  std::array<std::array<uint8_t, 4>, 4> smul_idx{};
  std::array<std::array<uint8_t, 4>, 4> smul_ph{};
  std::array<int8_t, 16> beta_par{};   // beta D beta = par * D
  std::array<uint8_t, 16> dadj_ph{};   // D^dag = i^k D
  std::array<uint8_t, 4> sadj_ph{};    // always 0: Pauli Hermitian

  BasisTables() {
    auto O = GInt{0, 0};
    auto I = GInt{1, 0};
    auto J = GInt{0, 1};
    GMat<2> s0{{{I, O}, {O, I}}};
    GMat<2> s1{{{O, I}, {I, O}}};
    GMat<2> s2{{{O, GInt{0, -1}}, {J, O}}};
    GMat<2> s3{{{I, O}, {O, GInt{-1, 0}}}};
    pauli = {s0, s1, s2, s3};

    std::array<GMat<4>, 4> g{};  // gamma^0..gamma^3
    for (auto& mref : g) mref = GMat<4>{};
    for (int i = 0; i < 2; ++i) {
      g[0][i][i] = I;
      g[0][i + 2][i + 2] = GInt{-1, 0};
    }
    for (int k = 1; k <= 3; ++k)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          g[k][i][j + 2] = pauli[k][i][j];
          g[k][i + 2][j] = pauli[k][i][j] * GInt{-1, 0};
        }

    for (int mask = 0; mask < 16; ++mask) {
      GMat<4> m{};
      for (int i = 0; i < 4; ++i) m[i][i] = I;
      for (int k = 0; k < 4; ++k)
        if (mask & (1 << k)) m = gmul(m, g[k]);
      dirac[mask] = m;
    }

    auto dmatch = [&](const GMat<4>& m, uint8_t& idx, uint8_t& ph) {
      for (int d = 0; d < 16; ++d)
        for (int k = 0; k < 4; ++k)
          if (gphase(dirac[d], k) == m) {
            idx = static_cast<uint8_t>(d);
            ph = static_cast<uint8_t>(k);
            return;
          }
      assert(false && "gamma monomial product outside basis");
    };
    auto smatch = [&](const GMat<2>& m, uint8_t& idx, uint8_t& ph) {
      for (int s = 0; s < 4; ++s)
        for (int k = 0; k < 4; ++k)
          if (gphase(pauli[s], k) == m) {
            idx = static_cast<uint8_t>(s);
            ph = static_cast<uint8_t>(k);
            return;
          }
      assert(false && "pauli product outside basis");
    };

    for (int a = 0; a < 16; ++a)
      for (int b = 0; b < 16; ++b)
        dmatch(gmul(dirac[a], dirac[b]), dmul_idx[a][b], dmul_ph[a][b]);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b)
        smatch(gmul(pauli[a], pauli[b]), smul_idx[a][b], smul_ph[a][b]);

    for (int d = 0; d < 16; ++d) {
      GMat<4> c = gmul(gmul(dirac[1], dirac[d]), dirac[1]);  // beta D beta
      uint8_t idx, ph;
      dmatch(c, idx, ph);
      assert(idx == d && (ph == 0 || ph == 2));
      beta_par[d] = (ph == 0) ? 1 : -1;
      dmatch(gdagger(dirac[d]), idx, ph);
      assert(idx == d);
      dadj_ph[d] = ph;
    }
    sadj_ph.fill(0);
  }
};

inline const BasisTables& tables() {
  static const BasisTables t;
  return t;
}

}  // namespace detail

struct MatProd {
  MatElem elem;
  uint8_t iphase;  // result = i^iphase * elem
};

inline MatProd mat_mul(MatElem a, MatElem b) {
  const auto& t = detail::tables();
  MatProd out;
  out.elem.dirac = t.dmul_idx[a.dirac][b.dirac];
  out.elem.spin = t.smul_idx[a.spin][b.spin];
  out.iphase =
      static_cast<uint8_t>((t.dmul_ph[a.dirac][b.dirac] + t.smul_ph[a.spin][b.spin]) & 3);
  return out;
}

inline bool mat_commute(MatElem a, MatElem b) {
  MatProd ab = mat_mul(a, b), ba = mat_mul(b, a);
  return ab.elem == ba.elem && ab.iphase == ba.iphase;
}

// beta X beta^-1 = +-X; +1 = even sector, -1 = odd
inline int beta_parity(MatElem e) { return detail::tables().beta_par[e.dirac]; }

// X^dag = i^k X
inline uint8_t mat_adjoint_iphase(MatElem e) {
  return detail::tables().dadj_ph[e.dirac];
}

inline std::string mat_name(MatElem e);  // defined after aliases

// Named aliases: each is i^iphase * basis element.
struct MatAlias {
  MatElem elem;
  uint8_t iphase;  // alias = i^iphase * elem
};

inline MatAlias mat_beta() { return {{0b0001, 0}, 0}; }
inline MatAlias mat_gamma(int k) {  // k = 1..3
  return {{static_cast<uint8_t>(1u << k), 0}, 0};
}
// alpha_k = gamma^0 gamma^k
inline MatAlias mat_alpha(int k) {
  return {{static_cast<uint8_t>(0b0001 | (1u << k)), 0}, 0};
}
// Sigma_k = (i/2) eps_kab gamma^a gamma^b (spatial, ascending order)
inline MatAlias mat_Sigma(int k) {
  switch (k) {
    case 1: return {{0b1100, 0}, 1};   // i g2 g3
    case 2: return {{0b1010, 0}, 3};   // -i g1 g3
    default: return {{0b0110, 0}, 1};  // i g1 g2
  }
}
// Pi_k = beta Sigma_k
inline MatAlias mat_Pi(int k) {
  MatAlias s = mat_Sigma(k);
  MatProd p = mat_mul(mat_beta().elem, s.elem);
  return {p.elem, static_cast<uint8_t>((s.iphase + p.iphase) & 3)};
}
// gamma^5 in the convention used here: [[0,-1],[-1,0]] = -i g0 g1 g2 g3
inline MatAlias mat_gamma5() { return {{0b1111, 0}, 3}; }
inline MatAlias mat_sigmam(int k) {
  return {{0, static_cast<uint8_t>(k)}, 0};
}

inline std::string mat_name(MatElem e) {
  std::string out;
  auto app = [&](const std::string& s) {
    if (!out.empty()) out += "*";
    out += s;
  };
  // prefer alias names for pure-Dirac pieces that have them
  switch (e.dirac) {
    case 0b0000: break;
    case 0b0001: app("beta"); break;
    case 0b0010: app("gamma_1"); break;
    case 0b0100: app("gamma_2"); break;
    case 0b1000: app("gamma_3"); break;
    case 0b0011: app("alpha_1"); break;
    case 0b0101: app("alpha_2"); break;
    case 0b1001: app("alpha_3"); break;
    case 0b1100: app("(-i*Sigma_1)"); break;
    case 0b1010: app("(i*Sigma_2)"); break;
    case 0b0110: app("(-i*Sigma_3)"); break;
    case 0b1101: app("(-i*Pi_1)"); break;
    case 0b1011: app("(i*Pi_2)"); break;
    case 0b0111: app("(-i*Pi_3)"); break;
    case 0b1111: app("(i*gamma5)"); break;
    case 0b1110: app("(i*beta*gamma5)"); break;  // g1 g2 g3
    default: app("g?" + std::to_string(e.dirac)); break;
  }
  if (e.spin != 0) app("sigmam_" + std::to_string(e.spin));
  if (out.empty()) out = "1";
  return out;
}

}  // namespace fw
