#pragma once

// Nets of trigonometric polynomials and the quotient algebra built from
// moderate and negligible nets, plus generalized numbers and point values.
//
// All verdicts are desk-scale: sup_n conditions are decided on n = 0..n_max
// by the head/tail rule, and quantifiers over h, lambda range over grids.

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "perigen/growth.hpp"
#include "perigen/series.hpp"
#include "perigen/trig_poly.hpp"
#include "perigen/weights.hpp"

namespace perigen {

inline constexpr std::size_t kMinNetLength = 8;

/// n -> f_n for n = 0..n_max, evaluated lazily and memoised.
///
/// Copies share the memo table.  Concurrent lookups are safe; a generator
/// may run twice for the same index under contention, which is harmless
/// because generators are pure.
class Net {
 public:
  using Generator = std::function<TrigPoly(std::size_t)>;

  /// A constant net keeps one entry; its norms are computed once.
  Net(Generator gen, std::size_t n_max, std::string label = "net", bool constant = false);

  std::size_t n_max() const { return n_max_; }
  const std::string& label() const { return label_; }
  bool is_constant() const { return constant_; }

  /// f_n; throws GeneratorFail if the generator raises.
  const TrigPoly& operator()(std::size_t n) const;
  /// Evaluates every index (in parallel).
  void materialize() const;

 private:
  struct Memo {
    std::mutex mu;
    std::vector<std::unique_ptr<TrigPoly>> slots;
  };

  Generator gen_;
  std::size_t n_max_;
  std::string label_;
  bool constant_;
  std::shared_ptr<Memo> memo_;
};

/// Checks n_max >= 8; entries are evaluated on first use.
Net make_net(Net::Generator gen, std::size_t n_max, std::string label = "net");
/// n -> f for all n.
Net constant_net(const TrigPoly& f, std::size_t n_max, std::string label = "const");
/// n -> D_n.
Net dirichlet_net(std::size_t n_max);

Net net_add(const Net& a, const Net& b);
Net net_sub(const Net& a, const Net& b);
Net net_mul(const Net& a, const Net& b);
Net net_scale(const Net& a, std::complex<double> s);
/// n -> s_n f_n.
Net net_scale(const Net& a, std::function<std::complex<double>(std::size_t)> s,
              std::string label);

enum class Mode { kModerate, kNegligible };
std::string to_string(Mode m);

/// {1/4, 1/2, 1, 2, 4, 8}.
std::vector<double> core_grid();
/// {1/16, ..., 32}.
std::vector<double> wide_grid();

struct Grids {
  std::vector<double> h;
  std::vector<double> lambda;
};

/// Universally quantified parameters range over the core grid; an
/// existential quantifier nested under a universal one ranges over the wide
/// grid.
Grids default_grids(UltraClass cls, Mode mode);

/// log ||f_n||_h for n = 0..n_max.
std::vector<double> log_norm_profile(const Net& net, const WeightSequence& ws, double h);
/// log ||f_n||_{M_p, r_j} for n = 0..n_max.
std::vector<double> log_norm_profile_rj(const Net& net, const WeightSequence& ws,
                                        const RSequence& rs);
/// log ||f_n||_inf for n = 0..n_max.
std::vector<double> log_sup_profile(const Net& net);

/// Memoised log ||f_n||_h profiles of one net, keyed by h.  With
/// Method::kCoefficient the net holds coefficient tables and the profile is
/// log sigma_h instead.
class NormCache {
 public:
  NormCache(Net net, WeightSequence ws, Method method = Method::kFullNorm)
      : net_(std::move(net)), ws_(std::move(ws)), method_(method) {}
  const Net& net() const { return net_; }
  const WeightSequence& weights() const { return ws_; }
  Method method() const { return method_; }
  const std::vector<double>& profile(double h);

 private:
  Net net_;
  WeightSequence ws_;
  Method method_;
  std::map<double, std::vector<double>> profiles_;
};

/// Probes log ||f_n||_h -+ M(lambda n) over the grids and folds them with the
/// given quantifiers; the outer parameter is h when outer_is_h.
GrowthVerdict fold_norm_grid(NormCache& cache, const Grids& grids, Quantifier outer,
                             Quantifier inner, bool outer_is_h, Mode mode, double tau);

/// Beurling: for all h some lambda; Roumieu: for all lambda some h.
GrowthVerdict classify_moderate(const Net& net, const WeightSequence& ws, UltraClass cls,
                                const Grids& grids, double tau = kDefaultTau);
GrowthVerdict classify_moderate(const Net& net, const WeightSequence& ws, UltraClass cls);
GrowthVerdict classify_moderate(NormCache& cache, UltraClass cls, const Grids& grids,
                                double tau = kDefaultTau);

/// Beurling: for all h and lambda; Roumieu: for some lambda and h.
GrowthVerdict classify_negligible(const Net& net, const WeightSequence& ws, UltraClass cls,
                                  const Grids& grids, double tau = kDefaultTau);
GrowthVerdict classify_negligible(const Net& net, const WeightSequence& ws, UltraClass cls);
GrowthVerdict classify_negligible(NormCache& cache, UltraClass cls, const Grids& grids,
                                  double tau = kDefaultTau);

/// Negligibility from sup norms alone.  `moderate` must be a bounded
/// moderate verdict for the same net, otherwise HypothesisFail.
GrowthVerdict classify_negligible_supnorm(const Net& net, const WeightSequence& ws,
                                          UltraClass cls, const GrowthVerdict& moderate,
                                          std::span<const double> lambda_grid,
                                          double tau = kDefaultTau);
GrowthVerdict classify_negligible_supnorm(const Net& net, const WeightSequence& ws,
                                          UltraClass cls, const GrowthVerdict& moderate);

/// The same tests with sigma_h of the coefficient tables of the net.
GrowthVerdict coef_classify(const Net& coefficients, const WeightSequence& ws, UltraClass cls,
                            Mode mode, const Grids& grids, double tau = kDefaultTau);
GrowthVerdict coef_classify(const Net& coefficients, const WeightSequence& ws, UltraClass cls,
                            Mode mode);

/// Roumieu tests through ||.||_{M_p, r_j} and M_{s_j}.  Moderate: for every
/// r in r_family some s in s_family; negligible: every pair.
GrowthVerdict roumieu_rj_classify(const Net& net, const WeightSequence& ws,
                                  std::span<const RSequence> r_family,
                                  std::span<const RSequence> s_family, Mode mode,
                                  double tau = kDefaultTau);

/// (z_n) for n = 0..n_max.
class GeneralizedNumber {
 public:
  explicit GeneralizedNumber(std::vector<std::complex<double>> values);
  static GeneralizedNumber constant(std::complex<double> z, std::size_t n_max);

  std::size_t n_max() const { return values_.size() - 1; }
  const std::vector<std::complex<double>>& values() const { return values_; }
  std::complex<double> operator[](std::size_t n) const { return values_[n]; }

  /// Beurling moderate: some lambda; Roumieu moderate: every lambda;
  /// negligible the other way round.  Results are cached per arguments.
  GrowthVerdict classify(const WeightSequence& ws, UltraClass cls, Mode mode,
                         std::span<const double> lambda_grid, double tau = kDefaultTau) const;
  GrowthVerdict classify(const WeightSequence& ws, UltraClass cls, Mode mode) const;

 private:
  std::vector<std::complex<double>> values_;
  struct Cache {
    std::mutex mu;
    std::map<std::string, GrowthVerdict> verdicts;
  };
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// n -> f_n(t_n); t must be real with entries in [0, 2 pi].
GeneralizedNumber point_value(const Net& f, const GeneralizedNumber& t);

struct Witness {
  double lambda = 0.0;
  std::vector<std::size_t> indices;  // m_n, increasing
  std::vector<double> points;        // argmax t_n of |f_{m_n}|
  std::vector<double> log_excess;    // log |f_{m_n}(t_n)| + M(lambda m_n) - baseline
};

/// Indices where ||f_n||_inf e^{M(lambda n)} escapes the head baseline,
/// with the points realising the sup.  NoWitness if the net passes.
Witness find_witness(const Net& net, const WeightSequence& ws, double lambda,
                     double tau = kDefaultTau);
/// t'_l = t_n at l = m_n and 0 elsewhere.
GeneralizedNumber witness_point(const Witness& w, std::size_t n_max);

}  // namespace perigen
