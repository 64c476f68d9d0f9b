#include "perigen/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "perigen/error.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

Grids default_regular_grids(UltraClass cls) {
  if (cls == UltraClass::kBeurling) return {wide_grid(), core_grid()};
  return {core_grid(), wide_grid()};
}

RegularityVerdict classify_regular(const Net& net, const WeightSequence& ws, UltraClass cls,
                                   const Grids& grids, double tau) {
  NormCache cache(net, ws);
  RegularityVerdict out;
  out.moderate = classify_moderate(cache, cls, default_grids(cls, Mode::kModerate), tau);
  if (!out.moderate.bounded)
    throw HypothesisFail("net " + net.label() + " is not moderate; regularity is undefined");
  const bool roumieu = cls == UltraClass::kRoumieu;
  out.pattern = roumieu ? "exists h, forall lambda" : "exists lambda, forall h";
  out.verdict = fold_norm_grid(cache, grids, Quantifier::kExists, Quantifier::kForAll, roumieu,
                               Mode::kModerate, tau);
  out.verdict.test = "regular";
  out.regular = out.verdict.bounded;
  return out;
}

RegularityVerdict classify_regular(const Net& net, const WeightSequence& ws, UltraClass cls) {
  return classify_regular(net, ws, cls, default_regular_grids(cls));
}

GrowthVerdict coefficient_decay_class(const CoefDistribution& c, const WeightSequence& ws,
                                      UltraClass cls, std::span<const double> mu_grid,
                                      long k_max, double tau) {
  if (mu_grid.empty()) throw InvalidSpec("empty mu grid");
  const WeightView view(ws);
  std::vector<Probe> probes;
  for (double mu : mu_grid) {
    const TailTest t = coefficient_profile_test(c, view, mu, SeminormSign::kPlus, k_max, tau);
    probes.push_back({0.0, mu, t.margin, t.witness, t.bounded});
  }
  const Quantifier q = cls == UltraClass::kBeurling ? Quantifier::kForAll : Quantifier::kExists;
  GrowthVerdict v = fold_quantifiers(std::move(probes), 1, Quantifier::kForAll, q, tau);
  v.outer_name = "";
  v.inner_name = "mu";
  v.method = Method::kCoefficient;
  v.test = "decay";
  return v;
}

GrowthVerdict coefficient_decay_class(const CoefDistribution& c, const WeightSequence& ws,
                                      UltraClass cls) {
  const auto grid = core_grid();
  return coefficient_decay_class(c, ws, cls, grid);
}

LemmaRegReport check_lemmareg(const CoefDistribution& f, const Mollifier& m,
                              const WeightSequence& ws, std::span<const double> lambda_grid,
                              std::size_t n_max, long k_max, double tau) {
  if (m.r() != 1.0) throw MollifierFail("the residual lemma needs a mollifier with r = 1");
  if (lambda_grid.empty()) throw InvalidSpec("empty lambda grid");
  const WeightView view(ws);
  const double H = ws.H();
  const long K = f.support() ? std::min(*f.support(), k_max) : k_max;

  std::vector<double> log_f(std::size_t(2 * K + 1));
  for (long k = -K; k <= K; ++k) log_f[std::size_t(k + K)] = f.log_coef(k).log_abs;

  std::vector<Probe> probes;
  std::vector<LemmaRegReport> rows;
  for (double lambda : lambda_grid) {
    LemmaRegReport r;
    r.lambda = lambda;
    r.H = H;
    // K = sigma'_lambda(f) must be finite, and sigma'_{H lambda}(f) too.
    const TailTest k_test =
        coefficient_profile_test(f, view, lambda, SeminormSign::kMinus, k_max, tau);
    const TailTest hk_test =
        coefficient_profile_test(f, view, H * lambda, SeminormSign::kMinus, k_max, tau);
    std::vector<double> m_hl(std::size_t(K) + 1);
    for (long l = 0; l <= K; ++l)
      m_hl[std::size_t(l)] = associated_function(ws, H * lambda * double(l));
    std::vector<double> prof(n_max + 1, -kInf);
    for (std::size_t n = 0; n <= n_max; ++n) {
      double best = -kInf;
      for (long k = -K; k <= K; ++k) {
        const double a = log_f[std::size_t(k + K)];
        if (a == -kInf) continue;
        const double gap = std::abs(1.0 - m.weight(k, n));
        if (gap == 0.0) continue;
        best = std::max(best, a + std::log(gap) - m_hl[std::size_t(std::abs(k))]);
      }
      if (best > -kInf) prof[n] = best + associated_function(ws, lambda * double(n));
    }
    TailTest t = bounded_test(prof, tau);
    const bool ok = t.bounded && k_test.bounded && hk_test.bounded;
    r.log_fitted = *std::max_element(prof.begin(), prof.end());
    const double log_k = log_coef_seminorm(f, view, lambda, SeminormSign::kMinus, k_max).log_value;
    r.log_allowed = std::log(ws.A()) + std::log1p(2.0 * std::numbers::pi * m.C()) + log_k;
    r.ratio = r.log_fitted == -kInf ? 0.0 : std::exp(r.log_fitted - r.log_allowed);
    double margin = t.margin;
    if (!k_test.bounded) margin = std::max(margin, k_test.margin);
    if (!hk_test.bounded) margin = std::max(margin, hk_test.margin);
    probes.push_back({0.0, lambda, margin, t.witness, ok});
    rows.push_back(r);
  }
  GrowthVerdict v =
      fold_quantifiers(probes, 1, Quantifier::kForAll, Quantifier::kExists, tau);
  v.inner_name = "lambda";
  v.method = Method::kCoefficient;
  v.test = "residual";

  // Report the first bounded grid value, or the best margin when none passes.
  std::size_t pick = v.decisive;
  for (std::size_t i = 0; i < probes.size(); ++i)
    if (probes[i].bounded) {
      pick = i;
      break;
    }
  LemmaRegReport out = rows[pick];
  out.pass = v.bounded;
  out.verdict = std::move(v);
  return out;
}

LemmaRegReport check_lemmareg(const CoefDistribution& f, const Mollifier& m,
                              const WeightSequence& ws, std::size_t n_max) {
  const auto grid = core_grid();
  return check_lemmareg(f, m, ws, grid, n_max);
}

RegularityReport regularity_theorem_check(const CoefDistribution& f, const Mollifier& m,
                                          const WeightSequence& ws, UltraClass cls,
                                          std::size_t n_max) {
  RegularityReport rep;
  const Net net = embed(f, m, n_max);
  rep.decay = coefficient_decay_class(f, ws, cls);
  rep.member = rep.decay.bounded;
  try {
    rep.regularity = classify_regular(net, ws, cls);
  } catch (const HypothesisFail&) {
    NormCache cache(net, ws);
    rep.regularity.moderate = classify_moderate(cache, cls, default_grids(cls, Mode::kModerate));
    rep.note = "embedded net is not moderate at this grid";
    return rep;
  }
  rep.moderate = true;
  rep.regular = rep.regularity.regular;
  rep.consistent = rep.regular == rep.member;
  if (m.r() == 1.0) rep.lemma = check_lemmareg(f, m, ws, n_max);
  if (!rep.regular) rep.note = "not regular at this grid";
  return rep;
}

}  // namespace perigen
