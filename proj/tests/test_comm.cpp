#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <complex>
#include <random>

#include "fw/comm_tools.hpp"

using namespace fw;

namespace {

using Mat8 = Eigen::Matrix<std::complex<double>, 8, 8>;

Mat8 random_mat(std::mt19937& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Mat8 m;
  for (int r = 0; r < 8; ++r)
    for (int c = 0; c < 8; ++c) m(r, c) = {u(rng), u(rng)};
  return m;
}

Mat8 mcomm(const Mat8& a, const Mat8& b) { return a * b - b * a; }
Mat8 macomm(const Mat8& a, const Mat8& b) { return a * b + b * a; }

int kinetic_core() {
  static int id = register_core(dot(pi_vec(), pi_vec()), "kinetic");
  return id;
}

int em_core() {
  static int id = [] {
    Expr z = dot(pi_vec(), pi_vec()) -
             expr_const(Const::E) * dot(mat_vec(mat_Sigma), jet_vec(Family::B));
    return register_core(z, "em");
  }();
  return id;
}

// a jet-free, function-free random expression
Expr random_poly(std::mt19937& rng, int max_terms = 2, int max_factors = 2) {
  auto atom = [&]() -> Expr {
    switch (rng() % 9) {
      case 0: return expr_pi(1 + rng() % 3);
      case 1: return expr_p(1 + rng() % 3);
      case 2: return expr_jet(Family::Phi, 0);
      case 3: return expr_jet(Family::A, 1 + rng() % 3);
      case 4: return expr_jet(Family::E, 1 + rng() % 3);
      case 5: return expr_mat(mat_beta());
      case 6: return expr_mat(mat_alpha(1 + rng() % 3));
      case 7: return expr_mat(mat_Sigma(1 + rng() % 3));
      default: return expr_timed();
    }
  };
  Expr e = expr_zero();
  int nt = 1 + rng() % max_terms;
  for (int t = 0; t < nt; ++t) {
    Expr w = expr_rat(rat(1 + rng() % 3));
    if (rng() % 2) w = w * expr_i();
    int nf = 1 + rng() % max_factors;
    for (int f = 0; f < nf; ++f) w = w * atom();
    e = e + w;
  }
  return e;
}

// independent 1/m expansion of a function factor, straight off the series
Expr series_poly(const FuncRat& f, int mass_cap) {
  const Expr& z = core_info(f.core).z;
  auto ser = funcrat_series_in_z(f, mass_cap + 4);
  Expr out = expr_zero();
  for (const auto& [k, co] : ser) {
    if (co.exp[static_cast<int>(Const::M)] < -mass_cap) continue;
    out = out + expr_coeff(co) * expr_pow(z, k);
  }
  return out;
}

}  // namespace

TEST_CASE("inverse and square root identities hold on random matrices") {
  std::mt19937 rng(2208);
  for (int it = 0; it < 20; ++it) {
    Mat8 a = Mat8::Identity() + 0.3 * random_mat(rng);
    Mat8 b = random_mat(rng);
    Mat8 ainv = a.inverse();
    // [A^-1, B] = A^-1 [B, A] A^-1
    CHECK((mcomm(ainv, b) - ainv * mcomm(b, a) * ainv).norm() < 1e-12);
    // {A, B} = [A, B] + 2BA
    CHECK((macomm(a, b) - mcomm(a, b) - 2.0 * b * a).norm() < 1e-12);
  }
  for (int it = 0; it < 20; ++it) {
    Mat8 c = random_mat(rng);
    Mat8 p = c * c.adjoint() + Mat8::Identity();
    Eigen::SelfAdjointEigenSolver<Mat8> es(p);
    Mat8 a = es.operatorSqrt();
    Mat8 ainv = a.inverse();
    Mat8 b = random_mat(rng);
    // [A, B] = (1/4){A^-1, [A^2, B]} - (1/4)[[A, [A, B]], A^-1]
    Mat8 lhs = mcomm(a, b);
    Mat8 rhs = 0.25 * macomm(ainv, mcomm(p, b)) -
               0.25 * mcomm(mcomm(a, mcomm(a, b)), ainv);
    CHECK((lhs - rhs).norm() / lhs.norm() < 1e-12);
  }
}

TEST_CASE("function commutators are exact for polynomials in the core") {
  int core = kinetic_core();
  const Expr& z = core_info(core).z;
  std::mt19937 rng(31);
  Policy unbounded;
  for (int it = 0; it < 60; ++it) {
    Expr t = random_poly(rng);
    // eps^2 = m^2 + Z commutes like Z
    CHECK(comm_func(FuncRat::eps_power(core, 2), t, unbounded) == comm(z, t));
    // eps^4 = (m^2 + Z)^2
    Expr z2 = z * z + expr_const(Const::M, 2) * expr_rat(2) * z;
    CHECK(comm_func(FuncRat::eps_power(core, 4), t, unbounded) == comm(z2, t));
  }
}

TEST_CASE("expanded commutators agree with plain ones on polynomial input") {
  std::mt19937 rng(77);
  for (int it = 0; it < 80; ++it) {
    Expr a = random_poly(rng), b = random_poly(rng);
    CHECK(comm_expanded(a, b) == comm(a, b));
    CHECK(acomm_expanded(a, b) == acomm(a, b));
  }
}

TEST_CASE("function commutator series matches the inverse-mass expansion") {
  int core = kinetic_core();
  Policy pol;
  pol.pot = 2;
  pol.str = 2;
  pol.weak = 2;
  pol.deriv = 2;
  Policy polm = pol;
  polm.mass = 7;
  std::array<FuncRat, 3> fs = {FuncRat::eps_power(core, -1),
                               FuncRat::eps_power(core, 1),
                               FuncRat{core, Poly2::constant(1), 2, 2}};
  std::array<Expr, 3> ts = {
      expr_jet(Family::Phi, 0),
      expr_mat(mat_Sigma(2)) * expr_jet(Family::E, 1),
      expr_const(Const::E) * expr_jet(Family::A, 2) * expr_pi(1)};
  for (const auto& f : fs)
    for (const auto& t : ts) {
      Expr lhs = expand_funcs(comm_func(f, t, pol), ExpandMode::inverse_mass, polm);
      Expr rhs = truncate(comm(series_poly(f, polm.mass), t), polm);
      CHECK(lhs == rhs);
    }
}

TEST_CASE("quarter-identity iteration agrees with the direct series") {
  int core = kinetic_core();
  Policy pol;
  pol.pot = 1;
  pol.str = 1;
  pol.weak = 1;
  pol.deriv = 2;
  Policy polm = pol;
  polm.mass = 7;
  std::array<Expr, 3> ts = {expr_jet(Family::Phi, 0), expr_jet(Family::E, 3),
                            expr_jet(Family::A, 1) * expr_pi(2)};
  for (const auto& t : ts) {
    Expr a = sqrt_commutator(core, t, pol);
    Expr b = comm_func(FuncRat::eps_power(core, 1), t, pol);
    CHECK(expand_funcs(a, ExpandMode::inverse_mass, polm) ==
          expand_funcs(b, ExpandMode::inverse_mass, polm));
  }
}

TEST_CASE("inverse commutator rewrite") {
  int core = kinetic_core();
  Policy pol;
  pol.pot = 1;
  pol.str = 1;
  pol.deriv = 2;
  Expr eps = expr_eps(core, 1);
  Expr b = expr_const(Const::E) * expr_jet(Family::Phi, 0);
  // sandwich back: A [A^-1, B] A = [B, A]
  Expr lhs = eps * inv_commutator(eps, b, pol) * eps;
  CHECK(lhs == comm_expanded(b, eps, pol));
  // commuting argument: zero
  CHECK(inv_commutator(eps, expr_mat(mat_Sigma(3)), pol) == expr_zero());
  CHECK(comm_expanded(expr_mat(mat_Sigma(3)), eps, pol) == expr_zero());
}

TEST_CASE("time translation of the core") {
  int core = em_core();
  const Expr& z = core_info(core).z;
  CHECK(comm(z, expr_timed()) == -(expr_i() * time_derivative(z)));
  // d/dt eps^2 through the function machinery equals the polynomial result
  Policy pol;
  pol.pot = 4;
  pol.str = 4;
  pol.deriv = 4;
  CHECK(time_derivative_full(expr_func(FuncRat::eps_power(core, 2)), pol) ==
        time_derivative(z));
}

TEST_CASE("time derivative commutes with expansion") {
  int core = kinetic_core();
  Policy pol;
  pol.pot = 2;
  pol.str = 2;
  pol.deriv = 2;
  Policy polm = pol;
  polm.mass = 5;
  Expr x = expr_jet(Family::Phi, 0) * expr_func(FuncRat::eps_power(core, 2));
  Expr lhs = expand_funcs(time_derivative_full(x, pol), ExpandMode::inverse_mass, polm);
  Expr rhs = truncate(time_derivative(expand_funcs(x, ExpandMode::inverse_mass, polm)),
                      polm);
  CHECK(lhs == rhs);
}

TEST_CASE("weak-field split of the energy") {
  int core = em_core();
  WeakCore ws = weak_split_core(core);
  CHECK(core_info(ws.core0).z == dot(pi_vec(), pi_vec()));
  CHECK(ws.v == -(expr_const(Const::E) *
                  dot(mat_vec(mat_Sigma), jet_vec(Family::B))));
  Expr lhs = expand_weak(Coeff::one(), FuncRat::eps_power(core, 1));
  Expr rhs = expr_eps(ws.core0, 1) +
             expr_rat(rat(1, 4)) * acomm(expr_eps(ws.core0, -1), ws.v);
  CHECK(lhs == rhs);
  // a field-free core is its own weak-field limit
  Expr same = expand_weak(Coeff::one(), FuncRat::eps_power(kinetic_core(), 1));
  CHECK(same == expr_eps(kinetic_core(), 1));
}

TEST_CASE("inverse-mass expansion of the energy") {
  int core = kinetic_core();
  const Expr& z = core_info(core).z;
  Policy polm;
  polm.mass = 3;
  Expr got = expand_inverse_mass(Coeff::one(), FuncRat::eps_power(core, 1), polm);
  Expr want = expr_const(Const::M) + expr_rat(rat(1, 2)) * expr_const(Const::M, -1) * z -
              expr_rat(rat(1, 8)) * expr_const(Const::M, -3) * z * z;
  CHECK(got == want);
}

TEST_CASE("series failures are loud") {
  int core = kinetic_core();
  Expr phi = expr_jet(Family::Phi, 0);
  CHECK_THROWS_AS(comm_func(FuncRat::eps_power(core, -1), phi, Policy{}),
                  SeriesNotRequested);
  Policy loose;
  loose.pot = 100;
  CHECK_THROWS_AS(comm_func(FuncRat::eps_power(core, -1), phi, loose, 3),
                  SeriesDivergence);
  CHECK_THROWS_AS(ad_core(kinetic_core(), expr_eps(em_core(), 1)),
                  std::logic_error);
}

TEST_CASE("series order is reported") {
  int core = kinetic_core();
  Policy pol;
  pol.pot = 1;
  pol.str = 1;
  pol.deriv = 0;
  int ord = -1;
  Expr r = comm_func(FuncRat::eps_power(core, -1), expr_jet(Family::Phi, 0), pol,
                     16, &ord);
  CHECK(ord == 1);
  CHECK(!r.is_zero());
}
