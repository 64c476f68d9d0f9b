// One line per acceptance criterion; exit status 1 if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../battery.hpp"
#include "cli.hpp"
#include "perigen/embedding.hpp"
#include "perigen/operators.hpp"
#include "perigen/regularity.hpp"
#include "perigen/series.hpp"
#include "perigen/weights.hpp"

using namespace perigen;

namespace {

// Tolerances and budgets.
constexpr double kAssocTol = 1e-9;
constexpr double kSpotTol = 1e-3;
constexpr double kAssocBudget = 1.0;  // seconds
constexpr double kLemma2MTol = 1e-9;
constexpr double kRoundTripTol = 1e-10;
constexpr double kMultiplierTol = 1e-12;
constexpr double kNullBudget = 30.0;  // seconds
constexpr double kProductConstFactor = 10.0;
constexpr double kReconstructionTol = 1e-12;
constexpr double kSupLo = 0.30;
constexpr double kSupHi = 0.32;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> t;
  for (int i = 0; i < n; ++i) t.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return t;
}

TrigPoly random_poly(std::mt19937_64& rng, int degree) {
  std::normal_distribution<double> g;
  TrigPoly f(degree);
  for (int k = -degree; k <= degree; ++k) f.at(k) = {g(rng), g(rng)};
  return f;
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s [%d] %s: %s\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str());
  std::fflush(stdout);
}

Outcome associated_function_oracle() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double s : {0.5, 1.0, 2.0}) {
    const auto ws = WeightSequence::gevrey(s, 2000);
    for (double t : log_grid(1e-2, 1e4, 40)) {
      double brute = 0.0;
      for (int p = 0; p <= 2000; ++p) brute = std::max(brute, p * std::log(t) - s * std::lgamma(p + 1.0));
      worst = std::max(worst, std::abs(associated_function(ws, t) - brute));
    }
  }
  const auto p1 = WeightSequence::gevrey(1.0);
  const double m10 = associated_function(p1, 10.0);
  const double m20 = associated_function(p1, 20.0);
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= kAssocTol && std::abs(m10 - 7.9214) <= kSpotTol &&
                    std::abs(m20 - 17.5790) <= kSpotTol && elapsed < kAssocBudget;
  std::ostringstream os;
  os << "max |ratio - brute| = " << worst << ", M(10) = " << m10 << ", M(20) = " << m20
     << ", " << elapsed << " s";
  return {pass, os.str()};
}

Outcome lemma_2m() {
  double worst = -1e300;
  for (double s : {0.5, 1.0, 2.0}) {
    const auto rep = check_lemma_2M(WeightSequence::gevrey(s), log_grid(1e-2, 1e4, 40));
    worst = std::max(worst, rep.max_excess);
  }
  std::ostringstream os;
  os << "max of 2M(t) - M(Ht) - log A = " << worst;
  return {worst <= kLemma2MTol, os.str()};
}

Outcome fourier_round_trip() {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> deg(0, 64);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TrigPoly f = random_poly(rng, deg(rng));
    const auto r = fourier_coefficients([&](double t) { return eval(f, t); }, f.degree());
    worst = std::max(worst, max_coef_diff(r.poly, f));
  }
  std::ostringstream os;
  os << "max coefficient error over 100 polynomials = " << worst;
  return {worst <= kRoundTripTol, os.str()};
}

Outcome multiplier_identity() {
  const auto p1 = WeightSequence::gevrey(1.0);
  const auto p2 = WeightSequence::gevrey(2.0);
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g;
  std::vector<Ultrapolynomial> ops{
      Ultrapolynomial::table({0.0, 0.0, 1.0}, p1, UltraClass::kBeurling),
      Ultrapolynomial::structure_beurling(1.0, p2),
      Ultrapolynomial::structure_roumieu(RSequence::linear(), RSequence::linear(), p1),
  };
  std::vector<cplx> expo(40);
  for (std::size_t n = 0; n < expo.size(); ++n) expo[n] = std::exp(-std::lgamma(double(n) + 1.0));
  ops.push_back(Ultrapolynomial::table(expo, p1, UltraClass::kBeurling));
  for (int i = 0; i < 4; ++i) {
    std::vector<cplx> a(8);
    for (auto& z : a) z = {g(rng), g(rng)};
    ops.push_back(Ultrapolynomial::table(a, p1, UltraClass::kRoumieu));
  }

  double worst = 0.0;
  for (const auto& P : ops) {
    const TrigPoly f = random_poly(rng, 24);
    const TrigPoly out = apply_operator(P, f);
    for (int k = -24; k <= 24; ++k) {
      const cplx want = log_eval_ultrapoly(P, double(k)).value() * f.coef(k);
      worst = std::max(worst, std::abs(out.coef(k) - want) / (1.0 + std::abs(want)));
    }
    for (const auto& c : {CoefDistribution::delta(), CoefDistribution::cot_reg(), CoefDistribution::exp_decay(1.0)}) {
      const CoefDistribution d = apply_operator(P, c);
      for (long k = -24; k <= 24; ++k) {
        const cplx want = log_eval_ultrapoly(P, double(k)).value() * c.coef(k);
        worst = std::max(worst, std::abs(d.coef(k) - want) / (1.0 + std::abs(want)));
      }
    }
  }
  std::ostringstream os;
  os << ops.size() << " operators, max relative residual = " << worst;
  return {worst <= kMultiplierTol, os.str()};
}

Outcome null_characterization(const std::vector<testing::BatteryNet>& battery) {
  const auto t0 = Clock::now();
  const auto ws = WeightSequence::gevrey(1.0);
  int agree = 0, correct = 0;
  std::string mismatches;
  for (const auto& b : battery) {
    const auto full = classify_negligible(b.net, ws, UltraClass::kRoumieu);
    const auto mod = classify_moderate(b.net, ws, UltraClass::kRoumieu);
    const auto sup = classify_negligible_supnorm(b.net, ws, UltraClass::kRoumieu, mod);
    if (full.bounded == sup.bounded) ++agree;
    else mismatches += " " + b.name;
    if (full.bounded == b.negligible) ++correct;
  }
  const double elapsed = seconds_since(t0);
  std::ostringstream os;
  os << agree << "/" << battery.size() << " agree, " << correct << "/" << battery.size()
     << " match construction, " << elapsed << " s" << mismatches;
  const int size = int(battery.size());
  return {agree == size && correct == size && elapsed < kNullBudget, os.str()};
}

Outcome coefficient_equivalence(const std::vector<testing::BatteryNet>& battery) {
  const auto ws = WeightSequence::gevrey(1.0);
  int agree = 0;
  std::string mismatches;
  for (const auto& b : battery) {
    bool ok = true;
    for (Mode mode : {Mode::kModerate, Mode::kNegligible}) {
      const bool fn = mode == Mode::kModerate ? classify_moderate(b.net, ws, UltraClass::kRoumieu).bounded
                                              : classify_negligible(b.net, ws, UltraClass::kRoumieu).bounded;
      ok = ok && fn == coef_classify(b.net, ws, UltraClass::kRoumieu, mode).bounded;
    }
    if (ok) ++agree;
    else mismatches += " " + b.name;
  }
  std::ostringstream os;
  os << agree << "/" << battery.size() << " agree in both modes" << mismatches;
  return {agree == int(battery.size()), os.str()};
}

Outcome product_preservation() {
  const auto ws = WeightSequence::gevrey(1.0);
  const auto m = Mollifier::dirichlet();
  const auto f = CoefDistribution::exp_decay(1.0);
  const auto rep = check_product_preservation(f, f, m, ws, UltraClass::kRoumieu);

  struct Pair {
    TrigPoly a, b;
  };
  const std::vector<Pair> band{{TrigPoly::sin(), TrigPoly::cos()},
                               {TrigPoly::monomial(2, {1.0, 1.0}) + TrigPoly::constant(0.5),
                                TrigPoly::monomial(-3, 2.0) + TrigPoly::sin()}};
  bool exact = true;
  for (const auto& p : band) {
    const auto r = check_product_preservation(CoefDistribution::from_trig(p.a, "a"),
                                              CoefDistribution::from_trig(p.b, "b"), m, ws,
                                              UltraClass::kRoumieu);
    exact = exact && r.band_limited && r.exact_zero &&
            r.exact_from == std::size_t(p.a.degree() + p.b.degree());
  }
  std::ostringstream os;
  os << "negligible = " << (rep.negligible.bounded ? "yes" : "no")
     << ", fitted / ((1 + 2 pi C) K) = " << rep.worst_ratio
     << ", band-limited differences zero = " << (exact ? "yes" : "no");
  return {rep.negligible.bounded && rep.worst_ratio <= kProductConstFactor && exact, os.str()};
}

Outcome structure_theorem() {
  const auto p2 = WeightSequence::gevrey(2.0);
  const auto c = CoefDistribution::from_trig(CoefDistribution::exp_growth(1.0, p2).truncate(200), "e^M");
  FactorParams params;
  params.lambda = 1.0;
  const auto fz = structure_factorize(c, p2, UltraClass::kBeurling, params, WeightSequence::gevrey(3.0), 200);
  const auto lb = lower_bound_check(fz.P, 1.0, log_grid(1.0, 100.0, 40));
  std::ostringstream os;
  os << "reconstruction = " << fz.reconstruction_error << ", sup |g_k| e^{M(k)} bounded = "
     << (fz.g_decay_m.bounded ? "yes" : "no") << " (margin " << fz.g_decay_m.margin
     << "), log C' = " << lb.log_c_prime;
  return {fz.reconstruction_error <= kReconstructionTol && fz.g_decay_m.bounded && lb.pass &&
              std::isfinite(lb.log_c_prime),
          os.str()};
}

Outcome regularity_instances() {
  const auto p1 = WeightSequence::gevrey(1.0);
  const auto m = Mollifier::dirichlet();
  struct Case {
    CoefDistribution f;
    UltraClass cls;
  };
  const std::vector<Case> battery{
      {CoefDistribution::from_trig(TrigPoly::sin(), "sin"), UltraClass::kRoumieu},
      {CoefDistribution::from_trig(TrigPoly::cos() + TrigPoly::monomial(3, 0.25), "trig"), UltraClass::kRoumieu},
      {CoefDistribution::exp_decay(1.0), UltraClass::kRoumieu},
      {CoefDistribution::exp_decay(0.5), UltraClass::kRoumieu},
      {CoefDistribution::delta(), UltraClass::kRoumieu},
      {CoefDistribution::cot_reg(), UltraClass::kRoumieu},
      {CoefDistribution::exp_growth(0.05, WeightSequence::gevrey(2.0)), UltraClass::kRoumieu},
      {CoefDistribution::exp_growth(1.0, p1), UltraClass::kBeurling}};
  int consistent = 0;
  bool delta_irregular = false, decay_regular = false;
  std::string bad;
  for (const auto& c : battery) {
    const auto r = regularity_theorem_check(c.f, m, p1, c.cls);
    if (r.consistent) ++consistent;
    else bad += " " + c.f.label();
    if (c.f.tag() == CoefDistribution::Tag::kDelta) delta_irregular = !r.regular;
    if (c.f.label() == CoefDistribution::exp_decay(1.0).label()) decay_regular = r.regular;
  }
  std::ostringstream os;
  os << consistent << "/" << battery.size() << " consistent, iota(delta) regular = "
     << (delta_irregular ? "no" : "yes") << ", iota(exp_decay(1)) regular = " << (decay_regular ? "yes" : "no")
     << bad;
  return {consistent == int(battery.size()) && delta_irregular && decay_regular, os.str()};
}

Outcome schwartz_demo() {
  const auto d = cli::schwartz_demo(64);
  double lo = 1e300, hi = -1e300;
  for (std::size_t n = 16; n <= 64; ++n) {
    lo = std::min(lo, d.sup_u[n]);
    hi = std::max(hi, d.sup_u[n]);
  }
  const bool band = lo >= kSupLo && hi <= kSupHi;
  std::ostringstream os;
  os << "sup |u_n| in [" << lo << ", " << hi << "] for 16 <= n <= 64; u negligible = "
     << (d.u_negligible.bounded ? "yes" : "no") << "; w - iota(delta) negligible = "
     << (d.w_minus_delta_negligible.bounded ? "yes" : "no") << " (edge coefficient " << d.w_minus_delta_edge
     << " at n = 64)";
  return {band && !d.u_negligible.bounded && d.w_minus_delta_negligible.bounded, os.str()};
}

Outcome residual_lemma() {
  const auto p1 = WeightSequence::gevrey(1.0);
  const auto m = Mollifier::dirichlet();
  const auto c = check_lemmareg(CoefDistribution::cot_reg(), m, p1);
  const auto e = check_lemmareg(CoefDistribution::exp_growth(1.0, p1), m, p1);
  std::ostringstream os;
  os << "cot_reg: " << (c.pass ? "bounded" : "unbounded") << " at lambda = " << c.lambda
     << "; exp_growth(1): " << (e.pass ? "bounded" : "unbounded") << " at lambda = " << e.lambda;
  return {c.pass && e.pass, os.str()};
}

}  // namespace

int main() {
  report(1, "associated function oracle", associated_function_oracle);
  report(2, "2M(t) <= M(Ht) + log A", lemma_2m);
  report(3, "Fourier round trip", fourier_round_trip);
  report(4, "multiplier identity", multiplier_identity);
  const auto battery = testing::null_battery(32);
  report(5, "null characterization", [&] { return null_characterization(battery); });
  report(6, "coefficient classifier equivalence", [&] { return coefficient_equivalence(battery); });
  report(7, "product preservation", product_preservation);
  report(8, "structure factorization", structure_theorem);
  report(9, "regularity instances", regularity_instances);
  report(10, "delta products demo", schwartz_demo);
  report(11, "mollifier residual bound", residual_lemma);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
