#pragma once

#include <array>
#include <cassert>
#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include "fw/rational.hpp"

namespace fw {

// Field jets: derivative monomials d^a_x d^b_y d^c_z dt^k applied to one
// component of the potentials, the electric field, or the matter density n.
// Jets are the commuting "field coordinates" of expressions; momenta act on
// them by emitting derivatives.
//
// The free coordinates are the jets of Phi and A. Keeping every E- or B-jet
// as well would over-count (d_i E_j - d_j E_i is already a combination of
// A-jets, div B vanishes, and so on), and an over-complete basis breaks
// canonical forms. So:
//   * spatial derivatives of Phi turn into E and A jets (E = -grad Phi - dA/dt),
//     pulling out the smallest axis;
//   * an E-jet is kept only in that image form, i.e. when its component index
//     is <= every derivative axis it carries; others expand back through the
//     potentials and recanonicalize;
//   * B never exists as a jet at all: it is curl A on input and is
//     reassembled from antisymmetric A-jets by the printer.
// Every Maxwell identity then holds by construction.
enum class Family : uint8_t { Phi, A, E, B, N };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Phi: return "Phi";
    case Family::A: return "A";
    case Family::E: return "E";
    case Family::B: return "B";
    default: return "n";
  }
}

inline bool family_is_vector(Family f) {
  return f == Family::A || f == Family::E || f == Family::B;
}

struct Jet {
  Family fam = Family::Phi;
  uint8_t comp = 0;              // 1..3 for vector families, 0 otherwise
  std::array<uint8_t, 3> sd{};  // spatial derivative multi-index
  uint8_t td = 0;                // time derivative count

  bool operator==(const Jet&) const = default;
  auto key() const { return std::tie(fam, comp, sd, td); }
  bool operator<(const Jet& o) const { return key() < o.key(); }

  int deriv_count() const { return sd[0] + sd[1] + sd[2] + td; }
  // grading weight: one per potential or density, one per derivative; E
  // carries a hidden derivative of Phi. Commutators only raise this.
  int grade() const {
    int base = (fam == Family::E || fam == Family::B) ? 2 : 1;
    return base + deriv_count();
  }

  std::string name() const {
    std::string out;
    for (int a = 0; a < 3; ++a)
      for (int r = 0; r < sd[a]; ++r)
        out += "d" + std::to_string(a + 1) + " ";
    for (int r = 0; r < td; ++r) out += "dt ";
    out += family_name(fam);
    if (comp != 0) out += "_" + std::to_string(comp);
    return out;
  }
};

using JetSum = std::vector<std::pair<Rat, Jet>>;

inline bool jet_is_canonical(const Jet& j) {
  if (j.fam == Family::Phi) return j.sd == std::array<uint8_t, 3>{};
  if (j.fam == Family::B) return false;
  if (j.fam == Family::E)
    for (int a = 0; a + 1 < j.comp; ++a)
      if (j.sd[a] != 0) return false;
  return true;
}

inline JetSum make_jet(Family fam, int comp, std::array<uint8_t, 3> sd, int td);

namespace detail {

inline void accum(JetSum& out, const Rat& c, const JetSum& part) {
  for (const auto& [q, j] : part) out.emplace_back(c * q, j);
}

}  // namespace detail

// Build the canonical linear combination for a raw derivative monomial of a
// field component.
inline JetSum make_jet(Family fam, int comp, std::array<uint8_t, 3> sd, int td) {
  assert(family_is_vector(fam) ? (comp >= 1 && comp <= 3) : comp == 0);
  JetSum out;
  if (fam == Family::Phi && sd != std::array<uint8_t, 3>{}) {
    int ax = sd[0] ? 0 : (sd[1] ? 1 : 2);
    auto rest = sd;
    rest[ax] -= 1;
    detail::accum(out, rat(-1), make_jet(Family::E, ax + 1, rest, td));
    detail::accum(out, rat(-1), make_jet(Family::A, ax + 1, rest, td + 1));
    return out;
  }
  if (fam == Family::E) {
    bool low_axis = false;
    for (int a = 0; a + 1 < comp; ++a)
      if (sd[a] != 0) low_axis = true;
    if (low_axis) {  // not the image of the Phi rewrite: go back through it
      auto beta = sd;
      beta[comp - 1] += 1;
      detail::accum(out, rat(-1), make_jet(Family::Phi, 0, beta, td));
      detail::accum(out, rat(-1), make_jet(Family::A, comp, sd, td + 1));
      return out;
    }
  }
  if (fam == Family::B) {  // sugar for curl A
    static constexpr int eps[3][3][3] = {
        {{0, 0, 0}, {0, 0, 1}, {0, -1, 0}},
        {{0, 0, -1}, {0, 0, 0}, {1, 0, 0}},
        {{0, 1, 0}, {-1, 0, 0}, {0, 0, 0}}};
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        if (eps[comp - 1][a][b] == 0) continue;
        auto da = sd;
        da[a] += 1;
        detail::accum(out, rat(eps[comp - 1][a][b]), make_jet(Family::A, b + 1, da, td));
      }
    return out;
  }
  out.emplace_back(rat(1), Jet{fam, static_cast<uint8_t>(comp), sd,
                               static_cast<uint8_t>(td)});
  return out;
}

inline JetSum d_space(const Jet& j, int axis) {  // axis 1..3
  auto sd = j.sd;
  sd[axis - 1] += 1;
  return make_jet(j.fam, j.comp, sd, j.td);
}

inline JetSum d_time(const Jet& j) { return make_jet(j.fam, j.comp, j.sd, j.td + 1); }

}  // namespace fw
