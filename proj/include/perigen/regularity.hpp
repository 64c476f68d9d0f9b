#pragma once

// The regular subalgebra: nets with a growth witness that does not depend on
// the second parameter, and the check that embedded distributions are
// regular exactly when they are ultradifferentiable.

#include <optional>
#include <span>
#include <string>

#include "perigen/algebra.hpp"
#include "perigen/embedding.hpp"
#include "perigen/series.hpp"

namespace perigen {

inline constexpr long kLemmaKMax = 1024;

struct RegularityVerdict {
  bool regular = false;
  std::string pattern;     // "exists lambda, forall h" or "exists h, forall lambda"
  GrowthVerdict verdict;   // margins per grid point
  GrowthVerdict moderate;  // the precondition
};

/// Beurling: lambda over the core grid, h over the wide grid; Roumieu the
/// other way round.  The universal parameter thus reaches past the
/// existential one on both ends.
Grids default_regular_grids(UltraClass cls);

/// Beurling: some lambda bounds ||f_n||_h e^{-M(lambda n)} for every h;
/// Roumieu: some h for every lambda.  HypothesisFail if the net is not
/// moderate.
RegularityVerdict classify_regular(const Net& net, const WeightSequence& ws, UltraClass cls,
                                   const Grids& grids, double tau = kDefaultTau);
RegularityVerdict classify_regular(const Net& net, const WeightSequence& ws, UltraClass cls);

/// (c_k) in s^*: Beurling sigma_mu finite for every mu, Roumieu for some mu.
GrowthVerdict coefficient_decay_class(const CoefDistribution& c, const WeightSequence& ws,
                                      UltraClass cls, std::span<const double> mu_grid,
                                      long k_max = kDefaultKMax, double tau = kDefaultTau);
GrowthVerdict coefficient_decay_class(const CoefDistribution& c, const WeightSequence& ws,
                                      UltraClass cls);

struct LemmaRegReport {
  bool pass = false;
  double lambda = 0.0;       // decisive grid value
  double H = 0.0;
  GrowthVerdict verdict;     // tail test of sigma'_{H lambda}(residual_n) e^{M(lambda n)}
  double log_fitted = 0.0;   // log sup_n of that quantity at lambda
  double log_allowed = 0.0;  // log A (1 + 2 pi C) K, K = sigma'_lambda(f)
  double ratio = 0.0;
};

/// Residual f_k - (f * phi_n)^(k) against e^{-M(lambda n)} in sigma'_{H lambda}.
/// MollifierFail unless r = 1.
LemmaRegReport check_lemmareg(const CoefDistribution& f, const Mollifier& m,
                              const WeightSequence& ws, std::span<const double> lambda_grid,
                              std::size_t n_max = 32, long k_max = kLemmaKMax,
                              double tau = kDefaultTau);
LemmaRegReport check_lemmareg(const CoefDistribution& f, const Mollifier& m,
                              const WeightSequence& ws, std::size_t n_max = 32);

struct RegularityReport {
  bool moderate = false;
  bool regular = false;
  bool member = false;
  bool consistent = false;
  RegularityVerdict regularity;
  GrowthVerdict decay;
  std::optional<LemmaRegReport> lemma;
  std::string note;
};

/// classify_regular(embed(f, m)) against coefficient_decay_class(f).
RegularityReport regularity_theorem_check(const CoefDistribution& f, const Mollifier& m,
                                          const WeightSequence& ws, UltraClass cls,
                                          std::size_t n_max = 32);

}  // namespace perigen
