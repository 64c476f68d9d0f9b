#pragma once

// Coefficient-represented periodic ultradistributions, norms and seminorms.
//
// Everything is coefficient-first: a distribution is an oracle k -> c_k,
// a function is a TrigPoly.  Magnitudes that can exceed the double range
// (e^{M(lambda k)} and friends) travel as log-magnitude plus phase.

#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perigen/growth.hpp"
#include "perigen/trig_poly.hpp"
#include "perigen/weights.hpp"

namespace perigen {

inline constexpr long kDefaultKMax = 4096;

enum class UltraClass { kBeurling, kRoumieu };
std::string to_string(UltraClass c);

/// A coefficient held as log|c| and a unit-modulus phase; zero has log_abs = -inf.
struct LogCoef {
  double log_abs = -std::numeric_limits<double>::infinity();
  cplx unit{1.0, 0.0};

  static LogCoef from(cplx z);
  static LogCoef zero() { return {}; }
  bool is_zero() const { return log_abs == -std::numeric_limits<double>::infinity(); }
  cplx value() const;
  friend LogCoef operator*(const LogCoef& a, const LogCoef& b) {
    return {a.log_abs + b.log_abs, a.unit * b.unit};
  }
};

/// k -> c_k with a declared growth class.
class CoefDistribution {
 public:
  enum class Tag { kDelta, kCotReg, kExpDecay, kExpGrowth, kTable, kDerived };
  using Oracle = std::function<LogCoef(long)>;

  CoefDistribution(Tag tag, Oracle oracle, UltraClass cls, double growth_lambda,
                   std::string label, std::optional<long> support = std::nullopt);

  /// c_k = 1/(2 pi).
  static CoefDistribution delta();
  /// Regularised cotangent i + 2i sum_{k>=1} e^{-2ikt}.
  static CoefDistribution cot_reg();
  /// c_k = e^{-mu |k|}.
  static CoefDistribution exp_decay(double mu);
  /// c_k = e^{M(lambda k)} for the weight sequence ws.
  static CoefDistribution exp_growth(double lambda, const WeightSequence& ws);
  static CoefDistribution from_trig(const TrigPoly& f, std::string label = "table");
  static CoefDistribution zero();

  Tag tag() const { return tag_; }
  UltraClass cls() const { return cls_; }
  double growth_lambda() const { return growth_lambda_; }
  const std::string& label() const { return label_; }
  /// Largest |k| with a possibly nonzero coefficient, when finite.
  std::optional<long> support() const { return support_; }

  LogCoef log_coef(long k) const { return oracle_(k); }
  /// Exact stored value for tables built from a TrigPoly, else from log form.
  cplx coef(long k) const;

  /// Coefficients on |k| <= degree as a TrigPoly (may overflow to inf).
  TrigPoly truncate(int degree) const;

  CoefDistribution scaled(cplx s) const;
  friend CoefDistribution operator+(const CoefDistribution& a, const CoefDistribution& b);
  /// Multiplication by e^{ikt}.
  CoefDistribution shifted(long k) const;
  /// Relabels the declared class.
  CoefDistribution with_class(UltraClass cls, double growth_lambda) const;

 private:
  Tag tag_;
  Oracle oracle_;
  UltraClass cls_;
  double growth_lambda_;
  std::string label_;
  std::optional<long> support_;
  std::shared_ptr<const TrigPoly> exact_;
};

struct SupNorm {
  double value = 0.0;
  double argmax = 0.0;  // in [0, 2 pi)
};

/// max |f(t)| on a uniform grid of max(4096, 16N+1) points, refined by
/// golden-section search around the leading grid maxima.
SupNorm sup_norm_detail(const TrigPoly& f);
double sup_norm(const TrigPoly& f);

struct UdNorm {
  double log_value = -std::numeric_limits<double>::infinity();
  std::size_t argmax_p = 0;
  bool truncated = false;  // termination criterion not met by p_max
  std::size_t exact_evaluations = 0;
};

/// log sup_p h^p ||D^p f||_inf / W_p for the weights W of the view.
UdNorm log_ud_norm(const TrigPoly& f, const WeightView& w, double h);
double ud_norm(const TrigPoly& f, const WeightSequence& ws, double h);
double ud_norm_rj(const TrigPoly& f, const WeightSequence& ws, const RSequence& rs);

struct FourierResult {
  TrigPoly poly;
  bool alias_warning = false;
};

/// Rectangle rule with 2N + 2 nodes; exact for degree <= N.
FourierResult fourier_coefficients(const std::function<cplx(double)>& samples, int N);

/// Convolution: c_k -> 2 pi f_k g_k.
TrigPoly convolve(const TrigPoly& f, const TrigPoly& g);
TrigPoly convolve(const CoefDistribution& f, const TrigPoly& g);
CoefDistribution convolve(const CoefDistribution& f, const CoefDistribution& g);

/// Pointwise product (Cauchy product of coefficients).
TrigPoly multiply(const TrigPoly& f, const TrigPoly& g);
TrigPoly multiply_serial(const TrigPoly& f, const TrigPoly& g);

enum class SeminormSign { kPlus, kMinus };

struct Seminorm {
  double log_value = -std::numeric_limits<double>::infinity();
  long argmax_k = 0;
  bool truncated = false;  // running sup still rising at K_max
};

/// sigma_lambda (plus) or sigma'_lambda (minus) of a finitely supported table.
Seminorm log_coef_seminorm(const TrigPoly& c, const WeightView& w, double lambda,
                           SeminormSign sign);
/// Same over |k| <= K_max (or the finite support) of an oracle.
Seminorm log_coef_seminorm(const CoefDistribution& c, const WeightView& w, double lambda,
                           SeminormSign sign, long k_max = kDefaultKMax);
double coef_seminorm(const TrigPoly& c, const WeightSequence& ws, double lambda,
                     SeminormSign sign);
double coef_seminorm(const CoefDistribution& c, const WeightSequence& ws, double lambda,
                     SeminormSign sign, long k_max = kDefaultKMax);

/// Per-|k| profile l -> max_{|k|=l} log|c_k| +- M(lambda l) on l = 0..K, and
/// the tail decision on it.  Finite support stops the sweep early.
TailTest coefficient_profile_test(const CoefDistribution& c, const WeightView& w, double lambda,
                                  SeminormSign sign, long k_max = kDefaultKMax,
                                  double tau = kDefaultTau);

}  // namespace perigen
