#include <cmath>
#include <vector>

#include "doctest.h"
#include "perigen/error.hpp"
#include "perigen/weights.hpp"

using namespace perigen;

namespace {

// sup_{p <= 2000} (p log t - s log p!), independent of the ratio search.
double brute_assoc(double s, double t) {
  double best = 0.0;
  for (int p = 0; p <= 2000; ++p) best = std::max(best, p * std::log(t) - s * std::lgamma(p + 1.0));
  return best;
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return t;
}

}  // namespace

TEST_CASE("associated function matches brute force") {
  for (double s : {0.5, 1.0, 2.0}) {
    // Same horizon on both sides; past t ~ 2000^s the maximizing p exceeds it.
    const auto ws = WeightSequence::gevrey(s, 2000);
    const auto full = WeightSequence::gevrey(s);
    for (double t : log_grid(1e-2, 1e4, 40)) {
      const double b = brute_assoc(s, t);
      CHECK(std::abs(associated_function(ws, t) - b) <= 1e-9 * std::max(1.0, b));
      if (std::pow(t, 1.0 / s) < 1000.0) CHECK(associated_function(full, t) == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("associated function spot values") {
  const auto ws = WeightSequence::gevrey(1.0);
  // mpmath: max_p (p log t - log p!)
  CHECK(associated_function(ws, 10.0) == doctest::Approx(7.92143835686494).epsilon(1e-12));
  CHECK(associated_function(ws, 20.0) == doctest::Approx(17.5790290103263).epsilon(1e-12));
  CHECK(associated_function(ws, 1.0) == 0.0);
  CHECK(associated_function(ws, 0.5) == 0.0);
  CHECK(associated_function(ws, -10.0) == associated_function(ws, 10.0));
  CHECK(associated_function(WeightSequence::gevrey(2.0), 10.0) ==
        doctest::Approx(3.32423634052603).epsilon(1e-12));
}

TEST_CASE("associated function is nondecreasing") {
  const auto ws = WeightSequence::gevrey(1.5);
  double prev = 0.0;
  for (double t : log_grid(1e-3, 1e5, 200)) {
    const double m = associated_function(ws, t);
    CHECK(m >= prev);
    prev = m;
  }
}

TEST_CASE("2M(t) <= M(Ht) + log A for gevrey presets") {
  for (double s : {0.5, 1.0, 2.0}) {
    const auto ws = WeightSequence::gevrey(s);
    CHECK(ws.A() == 1.0);
    CHECK(ws.H() == doctest::Approx(std::pow(2.0, s)));
    const auto grid = log_grid(1e-2, 1e4, 40);
    const auto rep = check_lemma_2M(ws, grid);
    CHECK(rep.pass);
    CHECK(rep.max_excess <= 1e-9);
    CHECK(rep.rows.size() == grid.size());
  }
}

TEST_CASE("table weights certify (M.2) by grid search") {
  std::vector<double> log_m(65);
  for (std::size_t p = 0; p < log_m.size(); ++p) log_m[p] = std::lgamma(double(p) + 1.0);
  const auto ws = WeightSequence::table(log_m);
  CHECK(ws.H() <= 2.0 + 1e-12);
  CHECK(ws.A() >= 1.0);
  CHECK(associated_function(ws, 10.0) == doctest::Approx(7.92143835686494).epsilon(1e-12));
  CHECK_THROWS_AS(ws.with_p_max(200), InvalidSpec);
}

TEST_CASE("table weight failures") {
  SUBCASE("log M_0 must vanish") {
    std::vector<double> log_m(20, 1.0);
    CHECK_THROWS_AS(WeightSequence::table(log_m), InvalidSpec);
  }
  SUBCASE("too short") { CHECK_THROWS_AS(WeightSequence::table({0.0, 1.0}), InvalidSpec); }
  SUBCASE("constant ratios do not diverge") {
    std::vector<double> log_m(40);
    for (std::size_t p = 0; p < log_m.size(); ++p) log_m[p] = double(p);
    CHECK_THROWS_AS(WeightSequence::table(log_m), DivergenceFail);
  }
  SUBCASE("not log-convex") {
    std::vector<double> log_m(40);
    for (std::size_t p = 0; p < log_m.size(); ++p) log_m[p] = std::lgamma(double(p) + 1.0);
    log_m[20] += 3.0;
    CHECK_THROWS_AS(WeightSequence::table(log_m), InvalidSpec);
  }
  SUBCASE("(M.2) fails with the supplied constants") {
    std::vector<double> log_m(40);
    for (std::size_t p = 0; p < log_m.size(); ++p) log_m[p] = 2.0 * std::lgamma(double(p) + 1.0);
    CHECK_THROWS_AS(WeightSequence::table(log_m, 1.0, 2.0), CertificationFail);
  }
  SUBCASE("super-exponential growth has no (M.2) constants") {
    std::vector<double> log_m(40);
    for (std::size_t p = 0; p < log_m.size(); ++p) log_m[p] = double(p * p);
    CHECK_THROWS_AS(WeightSequence::table(log_m), CertificationFail);
  }
}

TEST_CASE("gevrey parameters") {
  CHECK_THROWS_AS(WeightSequence::gevrey(0.0), InvalidSpec);
  CHECK_THROWS_AS(WeightSequence::gevrey(1.0, 4), InvalidSpec);
  const auto ws = WeightSequence::gevrey(1.0, 64);
  CHECK(ws.log_weight(10) == doctest::Approx(std::lgamma(11.0)));
  CHECK(ws.log_ratio(10) == doctest::Approx(std::log(10.0)));
}

TEST_CASE("r-sequences") {
  const auto lin = RSequence::linear();
  CHECK(lin.log_r(0) == 0.0);
  CHECK(lin.log_prod(3) == doctest::Approx(std::log(24.0)));
  const auto half = RSequence::power(0.5);
  CHECK(half.log_r(3) == doctest::Approx(0.5 * std::log(4.0)));
  const auto tab = RSequence::table({1.0, 2.0, 3.0, 5.0});
  CHECK(tab.log_r(10) == doctest::Approx(std::log(5.0)));
  CHECK_THROWS_AS(RSequence::table({2.0, 3.0, 4.0}), InvalidSpec);
  CHECK_THROWS_AS(RSequence::table({1.0, 3.0, 2.0}), InvalidSpec);
  CHECK_THROWS_AS(RSequence::table({1.0, 1.0, 1.5}), DivergenceFail);
  CHECK_THROWS_AS(RSequence::power(-1.0), InvalidSpec);
  // M_p prod r_j with r_j = j + 1 is p!^2 shifted by one factor.
  const auto ws = WeightSequence::gevrey(1.0);
  const double t = 30.0;
  double brute = 0.0;
  for (int p = 0; p <= 400; ++p)
    brute = std::max(brute, p * std::log(t) - std::lgamma(p + 1.0) - std::lgamma(p + 2.0));
  CHECK(associated_function_rj(ws, lin, t) == doctest::Approx(brute).epsilon(1e-12));
}

TEST_CASE("inclusion relations between gevrey sequences") {
  const auto g1 = WeightSequence::gevrey(1.0);
  const auto g2 = WeightSequence::gevrey(2.0);
  CHECK(relation(g1, g2, RelationKind::kSubset, 256).bounded);
  CHECK(relation(g1, g2, RelationKind::kStrict, 256).bounded);
  CHECK(relation(g1, g1, RelationKind::kSubset, 256).bounded);
  CHECK_FALSE(relation(g1, g1, RelationKind::kStrict, 256).bounded);
  CHECK_FALSE(relation(g2, g1, RelationKind::kSubset, 256).bounded);
  const auto v = relation(g1, g2, RelationKind::kStrict, 256);
  CHECK(v.test == "strict");
}
