#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fw/funcrat.hpp"

using namespace fw;

namespace {

// numeric value of a Coeff that may carry m and sqrt2 powers
double coeff_num(const Coeff& c, double mv) {
  REQUIRE(c.ipow == 0);
  double v = rat_double(c.rat);
  v *= std::pow(mv, c.exp[static_cast<int>(Const::M)]);
  v *= std::pow(2.0, 0.5 * c.exp[static_cast<int>(Const::Sqrt2)]);
  return v;
}

}  // namespace

TEST_CASE("polynomial division by eps+m") {
  Poly2 n = Poly2::eps_plus_m() * Poly2::eps_plus_m();
  auto d = n.try_divide_eps_plus_m();
  REQUIRE(d);
  CHECK(*d == Poly2::eps_plus_m());
  Poly2 bad = Poly2::eps() + Poly2::mvar() * 2;
  CHECK_FALSE(bad.try_divide_eps_plus_m());
}

TEST_CASE("canonicalization strips eps, eps+m and content") {
  // (2 eps^2 + 2 eps m) / (eps (eps+m)) = 2
  FuncRat f{0, (Poly2::eps(2) + (Poly2::eps() * Poly2::mvar())) * 2, 2, 2};
  Coeff c = f.canonicalize();
  CHECK(f.is_one());
  CHECK(c.rat == rat(2));
  // content with m: 2 m eps + 4 m^2 -> 2m * (eps + 2m)
  FuncRat g{0, Poly2::eps() * Poly2::mvar() * 2 + Poly2::mvar(2) * 4, 0, 0};
  Coeff cg = g.canonicalize();
  CHECK(cg.rat == rat(2));
  CHECK(cg.exp[static_cast<int>(Const::M)] == 1);
  CHECK(g.num == Poly2::eps() + Poly2::mvar() * 2);
}

TEST_CASE("partial fractions recombine across derivation paths") {
  // 1/eps - m/(eps(eps+m)) = 1/(eps+m)
  FuncRat a = FuncRat::eps_power(0, -1);
  FuncRat b{0, Poly2::constant(1), 2, 2};
  Coeff cb = Coeff::constant(Const::M) * rat(-1);
  auto merged = funcrat_merge(Coeff::one(), a, cb, b);
  REQUIRE(merged);
  auto [c, f] = *merged;
  CHECK(c.rat == rat(1));
  CHECK(f == FuncRat{0, Poly2::constant(1), 0, 2});
  // 1/eps + m/(eps(eps+m)) = (eps+2m)/(eps(eps+m))
  auto m2 = funcrat_merge(Coeff::one(), a, -cb, b);
  REQUIRE(m2);
  CHECK(m2->second.num == Poly2::eps() + Poly2::mvar() * 2);
  CHECK(m2->second.p == 2);
  CHECK(m2->second.q == 2);
}

TEST_CASE("opposite sqrt sectors never merge") {
  FuncRat a{0, Poly2::constant(1), 1, 1};  // 1/sqrt(eps(eps+m))
  FuncRat b{0, Poly2::constant(1), 2, 0};  // 1/eps
  CHECK_FALSE(funcrat_merge(Coeff::one(), a, Coeff::one(), b));
}

TEST_CASE("different cores never merge") {
  FuncRat a = FuncRat::eps_power(0, -1);
  FuncRat b = FuncRat::eps_power(1, -1);
  CHECK_FALSE(funcrat_merge(Coeff::one(), a, Coeff::one(), b));
}

TEST_CASE("cancellation to zero is detected") {
  FuncRat a = FuncRat::eps_power(0, -1);
  auto z = funcrat_merge(Coeff::one(), a, Coeff::one() * rat(-1), a);
  REQUIRE(z);
  CHECK(z->first.is_zero());
}

TEST_CASE("inverse and square root on denominator monomials") {
  FuncRat prod{0, Poly2::constant(1), -2, -2};  // eps(eps+m)
  auto s = funcrat_sqrt(prod);
  REQUIRE(s);
  CHECK(s->p == -1);
  CHECK(s->q == -1);
  auto i = funcrat_inv(*s);
  REQUIRE(i);
  CHECK(i->p == 1);
  CHECK(i->q == 1);
  FuncRat odd{0, Poly2::constant(1), 1, 1};
  CHECK_FALSE(funcrat_sqrt(odd));
  FuncRat poly{0, Poly2::eps_plus_m(), 0, 0};
  CHECK_FALSE(funcrat_inv(poly));
}

TEST_CASE("numeric evaluation") {
  double ev = 1.7, mv = 0.9;
  FuncRat f{0, Poly2::eps() + Poly2::mvar() * 3, 1, -1};
  double want = (ev + 3 * mv) * std::pow(ev, -0.5) * std::pow(ev + mv, 0.5);
  CHECK(funcrat_eval(f, ev, mv) == Catch::Approx(want).epsilon(1e-14));
}

TEST_CASE("inverse energy series has the binomial coefficients") {
  // 1/eps = (1/m)(1+u)^(-1/2), u = Z/m^2: 1, -1/2, 3/8, -5/16 ...
  auto s = funcrat_series_in_z(FuncRat::eps_power(0, -1), 3);
  REQUIRE(s.size() == 4);
  Rat want[4] = {rat(1), rat(-1, 2), rat(3, 8), rat(-5, 16)};
  for (const auto& [k, c] : s) {
    CHECK(c.rat == want[k]);
    CHECK(c.exp[static_cast<int>(Const::M)] == -1 - 2 * k);
    CHECK(c.exp[static_cast<int>(Const::Sqrt2)] == 0);
  }
}

TEST_CASE("energy series itself") {
  // eps = m (1+u)^(1/2): 1, 1/2, -1/8, 1/16
  auto s = funcrat_series_in_z(FuncRat::eps_power(0, 1), 3);
  Rat want[4] = {rat(1), rat(1, 2), rat(-1, 8), rat(1, 16)};
  for (const auto& [k, c] : s) {
    CHECK(c.rat == want[k]);
    CHECK(c.exp[static_cast<int>(Const::M)] == 1 - 2 * k);
  }
}

TEST_CASE("series of mixed half powers converges to the function") {
  // f = sqrt(eps+m)/sqrt(eps) (one factor of the exact rotation)
  FuncRat f{0, Poly2::constant(1), 1, -1};
  double mv = 1.3;
  double zv = 0.02;  // small Z
  double ev = std::sqrt(mv * mv + zv);
  double exact = funcrat_eval(f, ev, mv);
  double acc = 0;
  for (const auto& [k, c] : funcrat_series_in_z(f, 6))
    acc += coeff_num(c, mv) * std::pow(zv, k);
  CHECK(acc == Catch::Approx(exact).epsilon(1e-12));
  // and the truncation error shrinks with order
  double acc2 = 0;
  for (const auto& [k, c] : funcrat_series_in_z(f, 2))
    acc2 += coeff_num(c, mv) * std::pow(zv, k);
  CHECK(std::abs(acc2 - exact) > std::abs(acc - exact));
}

TEST_CASE("series carries sqrt2 factors for odd eps+m powers") {
  // 1/sqrt(eps(eps+m)): leading term 1/(m sqrt2) * sqrt2^0 ... check exact
  FuncRat f{0, Poly2::constant(1), 1, 1};
  auto s = funcrat_series_in_z(f, 2);
  REQUIRE(!s.empty());
  const auto& [k0, c0] = s.front();
  CHECK(k0 == 0);
  // value at Z=0: eps=m, f = 1/sqrt(2 m^2) = (1/2) sqrt2 / m
  CHECK(c0.exp[static_cast<int>(Const::Sqrt2)] == 1);
  CHECK(c0.rat == rat(1, 2));
  CHECK(c0.exp[static_cast<int>(Const::M)] == -1);
  double mv = 0.77, zv = 0.015;
  double ev = std::sqrt(mv * mv + zv);
  double acc = 0;
  for (const auto& [k, c] : funcrat_series_in_z(f, 8))
    acc += coeff_num(c, mv) * std::pow(zv, k);
  CHECK(acc == Catch::Approx(funcrat_eval(f, ev, mv)).epsilon(1e-12));
}

TEST_CASE("products stay exact under canonicalization") {
  // X1^2 with X1 = sqrt(eps+m)/(sqrt2 sqrt(eps)): rational square (eps+m)/eps
  FuncRat x1{0, Poly2::constant(1), 1, -1};
  FuncRat sq = funcrat_mul(x1, x1);
  Coeff c = sq.canonicalize();
  CHECK(c == Coeff::one());
  CHECK(sq == FuncRat{0, Poly2::constant(1), 2, -2});
  // (eps+m)/eps * eps/(eps+m) = 1
  FuncRat inv{0, Poly2::constant(1), -2, 2};
  FuncRat unit = funcrat_mul(sq, inv);
  unit.canonicalize();
  CHECK(unit.is_one());
}
