#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "perigen/error.hpp"
#include "perigen/kernels.hpp"
#include "perigen/series.hpp"

using namespace perigen;

namespace {

constexpr double kPi = std::numbers::pi;

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> g;
  TrigPoly f(degree);
  for (int k = -degree; k <= degree; ++k) f.at(k) = {g(rng), g(rng)};
  return f;
}

// Direct double sum on a dense grid.
double dense_max(const TrigPoly& f, int points) {
  double best = 0.0;
  for (int j = 0; j < points; ++j) {
    const double t = 2.0 * kPi * j / points;
    cplx s{};
    for (int k = -f.degree(); k <= f.degree(); ++k) s += f.coef(k) * std::polar(1.0, k * t);
    best = std::max(best, std::abs(s));
  }
  return best;
}

// sup_{p <= 80} h^p ||D^p f||_inf / p!^s with dense-grid sup norms.
double brute_ud(const TrigPoly& f, double s, double h) {
  double best = 0.0;
  for (int p = 0; p <= 80; ++p) {
    TrigPoly d(f.degree());
    for (int k = -f.degree(); k <= f.degree(); ++k) d.at(k) = std::pow(double(k), p) * f.coef(k);
    const double v = std::exp(p * std::log(h) - s * std::lgamma(p + 1.0)) * dense_max(d, 4000);
    best = std::max(best, v);
  }
  return best;
}

}  // namespace

TEST_CASE("fourier round trip") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> deg(0, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TrigPoly f = random_poly(rng, deg(rng));
    const auto r = fourier_coefficients([&](double t) { return eval(f, t); }, f.degree());
    worst = std::max(worst, max_coef_diff(r.poly, f));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("fourier edge warning") {
  // warns when an edge coefficient exceeds half the largest one
  const TrigPoly f = TrigPoly::constant(1.0) + TrigPoly::monomial(9, 1.0);
  const auto r = fourier_coefficients([&](double t) { return eval(f, t); }, 9);
  CHECK(r.alias_warning);
  const auto ok = fourier_coefficients([&](double t) { return eval(f, t); }, 12);
  CHECK_FALSE(ok.alias_warning);
  const TrigPoly g = TrigPoly::constant(1.0) + TrigPoly::monomial(9, 0.4);
  CHECK_FALSE(fourier_coefficients([&](double t) { return eval(g, t); }, 9).alias_warning);
  CHECK_THROWS_AS(fourier_coefficients([](double) { return cplx{}; }, -1), InvalidSpec);
}

TEST_CASE("sup norm of sin times the Dirichlet kernel") {
  // mpmath: max |cos(t/2) sin(16.5 t)| / pi
  const TrigPoly u = multiply(TrigPoly::sin(), TrigPoly::dirichlet(16));
  const SupNorm s = sup_norm_detail(u);
  CHECK(s.value == doctest::Approx(0.317949680002969).epsilon(1e-9));
  CHECK(s.argmax >= 0.0);
  CHECK(s.argmax < 2.0 * kPi);
}

TEST_CASE("sup norm against dense sampling") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const TrigPoly f = random_poly(rng, 1 + trial);
    const double s = sup_norm(f);
    const double d = dense_max(f, 20000);
    CHECK(s >= d - 1e-12);
    CHECK(s <= d * (1.0 + 1e-4));
  }
  CHECK(sup_norm(TrigPoly::zero()) == 0.0);
  CHECK(sup_norm(TrigPoly::constant({0.0, -3.0})) == doctest::Approx(3.0));
}

TEST_CASE("ud norms") {
  const auto ws = WeightSequence::gevrey(1.0);
  // sup_p 2^p / p! = 2
  CHECK(ud_norm(TrigPoly::monomial(1, 1.0), ws, 2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(ud_norm(TrigPoly::sin(), ws, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ud_norm_rj(TrigPoly::monomial(1, 1.0), ws, RSequence::linear()) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ud_norm(TrigPoly::zero(), ws, 1.0) == 0.0);
  CHECK_THROWS_AS(ud_norm(TrigPoly::sin(), ws, 0.0), InvalidSpec);

  std::mt19937_64 rng(3);
  for (double s : {1.0, 2.0}) {
    const auto w = WeightSequence::gevrey(s);
    for (double h : {0.25, 1.0, 4.0}) {
      const TrigPoly f = random_poly(rng, 5);
      const double ref = brute_ud(f, s, h);
      CHECK(ud_norm(f, w, h) == doctest::Approx(ref).epsilon(1e-4));
    }
    const TrigPoly d8 = TrigPoly::dirichlet(8);
    CHECK(ud_norm(d8, w, 0.5) == doctest::Approx(brute_ud(d8, s, 0.5)).epsilon(1e-4));
  }
}

TEST_CASE("coefficient seminorms") {
  const auto ws = WeightSequence::gevrey(1.0);
  const WeightView view(ws);
  // sigma_lambda(e^{-|k|}) = sup_k e^{-k + M(lambda k)}, brute force
  const auto c = CoefDistribution::exp_decay(1.0);
  for (double lambda : {0.25, 0.5}) {
    double ref = -1e300;
    for (long k = -500; k <= 500; ++k)
      ref = std::max(ref, -double(std::abs(k)) + associated_function(ws, lambda * double(k)));
    const Seminorm s = log_coef_seminorm(c, view, lambda, SeminormSign::kPlus, 1000);
    CHECK(s.log_value == doctest::Approx(ref).epsilon(1e-12));
    CHECK_FALSE(s.truncated);
  }
  // delta: sigma'_lambda = 1/(2 pi) at k = 0 for every lambda
  const Seminorm d = log_coef_seminorm(CoefDistribution::delta(), view, 1.0, SeminormSign::kMinus, 200);
  CHECK(d.log_value == doctest::Approx(-std::log(2.0 * kPi)));
  // the plus seminorm of delta keeps rising
  CHECK(log_coef_seminorm(CoefDistribution::delta(), view, 1.0, SeminormSign::kPlus, 200).truncated);

  CHECK(coefficient_profile_test(c, view, 0.5, SeminormSign::kPlus).bounded);
  CHECK_FALSE(coefficient_profile_test(c, view, 2.0, SeminormSign::kPlus).bounded);
  CHECK_FALSE(coefficient_profile_test(CoefDistribution::delta(), view, 0.25, SeminormSign::kPlus).bounded);
  const auto g = CoefDistribution::exp_growth(1.0, ws);
  CHECK(coefficient_profile_test(g, view, 1.0, SeminormSign::kMinus).bounded);
  CHECK_FALSE(coefficient_profile_test(g, view, 0.5, SeminormSign::kMinus).bounded);
}

TEST_CASE("distribution presets") {
  const auto cot = CoefDistribution::cot_reg();
  CHECK(cot.coef(0) == cplx{0.0, 1.0});
  CHECK(cot.coef(-4) == cplx{0.0, 2.0});
  CHECK(cot.coef(4) == cplx{});
  CHECK(cot.coef(-3) == cplx{});
  CHECK(CoefDistribution::delta().coef(17).real() == doctest::Approx(1.0 / (2.0 * kPi)));
  const auto s = CoefDistribution::from_trig(TrigPoly::sin(), "sin");
  REQUIRE(s.support().has_value());
  CHECK(*s.support() == 1);
  CHECK(s.coef(1) == cplx{0.0, -0.5});
  CHECK(CoefDistribution::exp_decay(1.0).coef(3).real() == doctest::Approx(std::exp(-3.0)));
  CHECK_THROWS_AS(CoefDistribution::exp_decay(0.0), InvalidSpec);
  CHECK_THROWS_AS(CoefDistribution::exp_growth(-1.0, WeightSequence::gevrey(1.0)), InvalidSpec);

  const auto shifted = s.shifted(2);
  CHECK(std::abs(shifted.coef(3) - cplx{0.0, -0.5}) < 1e-15);
  const auto sum = s + s.scaled(2.0);
  CHECK(std::abs(sum.coef(1) - cplx{0.0, -1.5}) < 1e-15);
}

TEST_CASE("convolution is the coefficient product with 2 pi") {
  const TrigPoly d4 = TrigPoly::dirichlet(4);
  const TrigPoly f = TrigPoly::sin() + TrigPoly::monomial(3, 2.0);
  const TrigPoly c = convolve(f, d4);
  CHECK(max_coef_diff(c, f) < 1e-15);
  const TrigPoly e = convolve(CoefDistribution::delta(), d4);
  CHECK(max_coef_diff(e, d4) < 1e-15);
}

TEST_CASE("OpenMP kernels agree with the serial references") {
  std::mt19937_64 rng(5);
  for (int degree : {0, 3, 40, 300}) {
    const TrigPoly a = random_poly(rng, degree);
    const TrigPoly b = random_poly(rng, degree / 2 + 1);
    const auto p = kernels::cauchy_product(a.coefficients(), a.degree(), b.coefficients(), b.degree());
    const auto q =
        kernels::cauchy_product_serial(a.coefficients(), a.degree(), b.coefficients(), b.degree());
    REQUIRE(p.size() == q.size());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == q[i]);

    const std::size_t grid = 4096;
    std::vector<double> x(grid), y(grid);
    kernels::abs_on_grid(a.coefficients(), a.degree(), grid, x);
    kernels::abs_on_grid_serial(a.coefficients(), a.degree(), grid, y);
    for (std::size_t i = 0; i < grid; ++i) CHECK(x[i] == y[i]);
  }
  // product against the direct double sum
  const TrigPoly a = random_poly(rng, 6), b = random_poly(rng, 4);
  const TrigPoly ab = multiply(a, b);
  for (int k = -10; k <= 10; ++k) {
    cplx s{};
    for (int j = -6; j <= 6; ++j) s += a.coef(j) * b.coef(k - j);
    CHECK(std::abs(ab.coef(k) - s) < 1e-12);
  }
  CHECK(max_coef_diff(multiply(a, b), multiply_serial(a, b)) == 0.0);
}
