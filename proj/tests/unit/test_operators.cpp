#include <cmath>
#include <random>
#include <vector>

#include "../battery.hpp"
#include "doctest.h"
#include "perigen/error.hpp"
#include "perigen/operators.hpp"

using namespace perigen;

namespace {

const auto kP1 = WeightSequence::gevrey(1.0);
const auto kP2 = WeightSequence::gevrey(2.0);

Ultrapolynomial z_squared(UltraClass cls = UltraClass::kBeurling) {
  return Ultrapolynomial::table({0.0, 0.0, 1.0}, kP1, cls);
}

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> g;
  TrigPoly f(degree);
  for (int k = -degree; k <= degree; ++k) f.at(k) = {g(rng), g(rng)};
  return f;
}

}  // namespace

TEST_CASE("finite tables certify in both classes") {
  const auto b = z_squared();
  CHECK(b.stored_degree() == 2);
  CHECK(b.C() == doctest::Approx(2.0));  // |a_2| = 1 <= C / 2!
  const auto r = z_squared(UltraClass::kRoumieu);
  CHECK(r.roumieu_constants().size() == default_roumieu_l_grid().size());

  // a_n = 1/n! is the equality case C = L = 1
  std::vector<cplx> a(30);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::exp(-std::lgamma(double(n) + 1.0));
  const auto e = Ultrapolynomial::table(a, kP1, UltraClass::kBeurling, std::pair{1.0, 1.0});
  CHECK(e.C() == 1.0);
  CHECK_THROWS_AS(Ultrapolynomial::table(a, kP1, UltraClass::kBeurling, std::pair{0.5, 1.0}), ClassFail);
  CHECK_THROWS_AS(Ultrapolynomial::table(a, kP1, UltraClass::kRoumieu, {}, {{0.5, 1.0}}), ClassFail);
  CHECK_THROWS_AS(Ultrapolynomial::table({}, kP1, UltraClass::kBeurling), ClassFail);
}

TEST_CASE("structure polynomials") {
  const auto P = Ultrapolynomial::structure_beurling(1.0, kP2);
  CHECK(P.form() == Ultrapolynomial::Form::kStructureBeurling);
  CHECK(eval_ultrapoly(P, 0.0) == 1.0);
  // a_{2p} = (lambda H^2)^{2p} / M_{2p} with H = 4
  CHECK(P.coefficients()[2].log_abs == doctest::Approx(2.0 * std::log(16.0) - 2.0 * std::lgamma(3.0)));
  CHECK(P.coefficients()[3].is_zero());
  // direct sum at x = 5
  double direct = 0.0;
  for (int p = 0; p < 60; ++p) direct += std::exp(2.0 * p * std::log(16.0 * 5.0) - 2.0 * std::lgamma(2.0 * p + 1.0));
  CHECK(eval_ultrapoly(P, 5.0) == doctest::Approx(direct).epsilon(1e-12));
  CHECK(eval_ultrapoly(P, -5.0) == doctest::Approx(direct).epsilon(1e-12));

  const auto R = Ultrapolynomial::structure_roumieu(RSequence::linear(), RSequence::linear(), kP1);
  CHECK(R.form() == Ultrapolynomial::Form::kStructureRoumieu);
  CHECK(eval_ultrapoly(R, 0.0) == 1.0);
  // P_1 = P_2 = sum (4x)^{2p} / ((2p)! (2p + 1)!)
  double p1 = 0.0;
  for (int p = 0; p < 60; ++p)
    p1 += std::exp(2.0 * p * std::log(4.0 * 3.0) - std::lgamma(2.0 * p + 1.0) - std::lgamma(2.0 * p + 2.0));
  CHECK(eval_ultrapoly(R, 3.0) == doctest::Approx(p1 * p1).epsilon(1e-12));
  CHECK_THROWS_AS(Ultrapolynomial::structure_beurling(0.0, kP2), ClassFail);
}

TEST_CASE("evaluation of finite tables") {
  CHECK(eval_ultrapoly(z_squared(), 3.0) == doctest::Approx(9.0));
  CHECK(eval_ultrapoly(z_squared(), -3.0) == doctest::Approx(9.0));
  CHECK(eval_ultrapoly(z_squared(), 0.0) == 0.0);
}

TEST_CASE("operators act as Fourier multipliers") {
  CHECK(max_coef_diff(apply_operator(z_squared(), TrigPoly::sin()), TrigPoly::sin()) <= 1e-15);
  CHECK(apply_operator(z_squared(), TrigPoly::zero()).is_zero());

  // sum z^n / n! at k gives e^k
  std::vector<cplx> a(40);
  for (std::size_t n = 0; n < a.size(); ++n) a[n] = std::exp(-std::lgamma(double(n) + 1.0));
  const auto E = Ultrapolynomial::table(a, kP1, UltraClass::kBeurling);
  for (int k : {-3, 1, 2, 5}) {
    const TrigPoly out = apply_operator(E, TrigPoly::monomial(k, 1.0));
    CHECK(std::abs(out.coef(k) - std::exp(double(k))) <= 1e-12 * std::exp(double(k)));
  }

  std::mt19937_64 rng(23);
  const auto P = Ultrapolynomial::structure_beurling(1.0, kP2);
  const TrigPoly f = random_poly(rng, 30);
  const TrigPoly g = apply_operator(P, f);
  for (int k = -30; k <= 30; ++k) {
    const cplx want = eval_ultrapoly(P, double(k)) * f.coef(k);
    CHECK(std::abs(g.coef(k) - want) <= 1e-12 * (1.0 + std::abs(want)));
  }

  const CoefDistribution d = apply_operator(z_squared(), CoefDistribution::delta());
  CHECK(d.coef(7).real() == doctest::Approx(49.0 / (2.0 * std::numbers::pi)));
}

TEST_CASE("shifted operators") {
  const auto s1 = shifted_operator(z_squared(), 1);
  REQUIRE(s1.stored_degree() == 2);
  CHECK(s1.coefficients()[0].value().real() == doctest::Approx(1.0));
  CHECK(s1.coefficients()[1].value().real() == doctest::Approx(2.0));
  CHECK(s1.coefficients()[2].value().real() == doctest::Approx(1.0));
  const auto s0 = shifted_operator(z_squared(), 0);
  CHECK(s0.coefficients()[0].is_zero());
  CHECK_THROWS_AS(shifted_operator(Ultrapolynomial::structure_beurling(1.0, kP2), 1), InvalidSpec);

  // P(D)(e^{ikt} f) = e^{ikt} P(D + k) f
  auto leibniz = [](const Ultrapolynomial& P, const TrigPoly& f, long k) {
    const TrigPoly e = TrigPoly::monomial(int(k), 1.0);
    return max_coef_diff(apply_operator(P, multiply(e, f)), multiply(e, apply_operator(shifted_operator(P, k), f)));
  };
  const TrigPoly d8 = TrigPoly::dirichlet(8);
  CHECK(leibniz(z_squared(), d8, 3) <= 1e-10);

  std::mt19937_64 rng(29);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<long> shift(-8, 8);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> a(6);
    for (auto& z : a) z = {g(rng), g(rng)};
    const auto P = Ultrapolynomial::table(a, kP1, UltraClass::kBeurling);
    const TrigPoly f = random_poly(rng, 6);
    const long k = shift(rng);
    const TrigPoly lhs = apply_operator(P, multiply(TrigPoly::monomial(int(k), 1.0), f));
    const double scale = std::max(1.0, sup_norm(lhs));
    CHECK(leibniz(P, f, k) <= 1e-10 * scale);
  }
}

TEST_CASE("structure factorization, Beurling") {
  // c_k = e^{M(k)} for p!^2
  const auto c = CoefDistribution::from_trig(CoefDistribution::exp_growth(1.0, kP2).truncate(200), "e^M");
  const auto fz = structure_factorize(c, kP2, UltraClass::kBeurling, {}, WeightSequence::gevrey(3.0));
  CHECK(fz.input_growth.bounded);
  CHECK(fz.reconstruction_error <= 1e-12);
  CHECK(fz.g_decay_m.bounded);
  CHECK(fz.g_decay_n.bounded);
  CHECK(fz.relation.bounded);

  const auto fd = structure_factorize(CoefDistribution::delta(), kP2, UltraClass::kBeurling, {},
                                      WeightSequence::gevrey(3.0));
  CHECK(fd.reconstruction_error <= 1e-12);
  CHECK(fd.g_decay_m.bounded);
  const double p5 = eval_ultrapoly(fd.P, 5.0);
  CHECK(fd.g.coef(5).real() == doctest::Approx(1.0 / (2.0 * std::numbers::pi * p5)).epsilon(1e-12));

  const auto f0 = structure_factorize(CoefDistribution::zero(), kP2,
                                      UltraClass::kBeurling, {}, WeightSequence::gevrey(3.0));
  CHECK(f0.g.coef(3) == cplx{});
  CHECK(f0.reconstruction_error == 0.0);

  CHECK_THROWS_AS(structure_factorize(CoefDistribution::delta(), kP2, UltraClass::kBeurling, {}, kP2),
                  RelationFail);
  // e^{M(2k)} outgrows sigma'_1
  CHECK_THROWS_AS(structure_factorize(CoefDistribution::exp_growth(2.0, kP2), kP2, UltraClass::kBeurling,
                                      {}, WeightSequence::gevrey(3.0)),
                  GrowthFail);
}

TEST_CASE("structure factorization, Roumieu") {
  const auto c = CoefDistribution::exp_growth(0.05, kP2);
  const auto fz = structure_factorize(c, kP2, UltraClass::kRoumieu, {}, WeightSequence::gevrey(3.0));
  CHECK(fz.reconstruction_error <= 1e-12);
  CHECK(fz.g_decay_m.bounded);
  CHECK(fz.g_decay_n.bounded);
  CHECK(fz.P.form() == Ultrapolynomial::Form::kStructureRoumieu);
}

TEST_CASE("lower bound check") {
  std::vector<double> x;
  for (int i = 0; i < 40; ++i) x.push_back(std::pow(100.0, double(i) / 39.0));
  const auto P = Ultrapolynomial::structure_beurling(1.0, kP2);
  const auto rep = lower_bound_check(P, 1.0, x);
  CHECK(rep.pass);
  CHECK(std::isfinite(rep.log_c_prime));
  CHECK(rep.log_p.size() == x.size());
  const auto poly = Ultrapolynomial::table({0.0, 0.0, 1.0}, kP2, UltraClass::kBeurling);
  CHECK_FALSE(lower_bound_check(poly, 1.0, x).pass);
  const std::vector<double> none;
  CHECK_THROWS_AS(lower_bound_check(P, 1.0, none), InvalidSpec);
}

TEST_CASE("operators preserve moderateness on the battery") {
  const auto P = z_squared(UltraClass::kBeurling);
  for (const auto& b : testing::null_battery()) {
    CAPTURE(b.name);
    const Net out = apply_operator(P, b.net);
    CHECK(classify_moderate(out, kP1, UltraClass::kBeurling).bounded);
    if (b.negligible) CHECK(classify_negligible(out, kP1, UltraClass::kRoumieu).bounded);
  }
  // Roumieu at lambda = 1/4: the extra n^2 is only absorbed well past n = 32
  // for D_n^2, whose own margin sits at the threshold.
  const auto Q = z_squared(UltraClass::kRoumieu);
  for (const auto& b : testing::null_battery()) {
    if (b.name == "D_n^2") continue;
    CAPTURE(b.name);
    CHECK(classify_moderate(apply_operator(Q, b.net), kP1, UltraClass::kRoumieu).bounded);
  }
}
