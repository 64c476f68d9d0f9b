#pragma once

// Mollifier sequences and the embeddings iota(f) = [(f * phi_n)_n] and
// sigma(f) = [(f)_n].

#include <complex>
#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "perigen/algebra.hpp"
#include "perigen/operators.hpp"
#include "perigen/series.hpp"

namespace perigen {

inline constexpr std::size_t kDefaultMollifierProbe = 64;
/// Coefficients below this fraction of the largest one are dropped by const_embed.
inline constexpr double kDefaultTailTol = 1e-18;

/// c_{k,n} with |c| <= C, c = 0 for |k| >= R n and c = 1/(2 pi) for
/// |k| <= r n (n >= 1).  Every kind uses phi_0 = 1/(2 pi).
class Mollifier {
 public:
  enum class Kind { kDirichlet, kCutoff, kTable };

  /// c_{k,n} = [|k| <= n] / (2 pi); (C, R, r) = (1/(2 pi), 2, 1).
  static Mollifier dirichlet();
  /// c_{k,n} = psi(k / n) for a continuous psi, 1/(2 pi) on [-r, r] and 0
  /// outside (-R, R).
  static Mollifier cutoff(std::function<double(double)> psi, double r, double R,
                          std::string descriptor);
  /// psi equal to 1/(2 pi) on [-r, r], linear down to 0 at |x| = R.
  static Mollifier trapezoid(double r = 1.0, double R = 2.0);
  /// Explicit rows n -> (c_{-K..K, n}); rows are centred at k = 0.
  static Mollifier table(std::map<std::size_t, std::vector<cplx>> rows, double C, double R,
                         double r);

  Kind kind() const { return kind_; }
  double C() const { return C_; }
  double R() const { return R_; }
  double r() const { return r_; }
  const std::string& descriptor() const { return descriptor_; }

  cplx coef(long k, std::size_t n) const;
  /// 2 pi c_{k,n}; exactly 1 on the plateau.
  cplx weight(long k, std::size_t n) const { return w_(k, n); }
  /// Largest |k| with c_{k,n} possibly nonzero.
  int degree(std::size_t n) const;
  /// phi_n as a trigonometric polynomial.
  TrigPoly phi(std::size_t n) const;

  /// Checks the three clauses for n = 1..n_probe; MollifierFail names the
  /// violated clause and the witness (k, n).
  void verify(std::size_t n_probe = kDefaultMollifierProbe) const;

 private:
  Mollifier() = default;

  Kind kind_ = Kind::kDirichlet;
  std::function<cplx(long, std::size_t)> w_;
  double C_ = 0.0;
  double R_ = 0.0;
  double r_ = 0.0;
  std::size_t rows_ = 0;  // table kinds: largest tabulated n
  std::string descriptor_;
};

/// n -> f * phi_n, coefficients 2 pi f_k c_{k,n}.
Net embed(const CoefDistribution& f, const Mollifier& m, std::size_t n_max);

struct ConstEmbedding {
  Net net;
  TrigPoly poly;              // the represented function (truncated)
  double truncation_tail = 0.0;  // sum of dropped |c_k| over |k| <= k_max
  GrowthVerdict decay;
};

/// sigma(f) for a function f (band-limited, or truncated with the tail recorded).
Net const_embed(const TrigPoly& f, std::size_t n_max);
/// DecayFail unless f passes the coefficient decay test of its class.
ConstEmbedding const_embed(const CoefDistribution& f, const WeightSequence& ws, UltraClass cls,
                           std::size_t n_max, long k_max = kDefaultKMax,
                           double tail_tol = kDefaultTailTol);

struct ResidualBound {
  std::string name;
  double lambda = 0.0;
  double log_k = 0.0;            // log sigma_lambda of the function
  double log_fitted = 0.0;       // log max_{k,n} |c_k| |1 - 2 pi c_{k,n}| e^{M(lambda r n)}
  double log_allowed = 0.0;      // log (1 + 2 pi C) K
  double ratio = 0.0;            // fitted / allowed
};

struct ProductReport {
  GrowthVerdict negligible;        // sigma(fg) - iota(f) iota(g)
  std::vector<ResidualBound> bounds;  // f, g and fg
  double worst_ratio = 0.0;
  bool band_limited = false;
  std::size_t exact_from = 0;      // deg f + deg g
  bool exact_zero = false;         // difference identically zero for n >= exact_from
};

ProductReport check_product_preservation(const CoefDistribution& f, const CoefDistribution& g,
                                         const Mollifier& m, const WeightSequence& ws,
                                         UltraClass cls, std::size_t n_max = 32);

struct CommuteReport {
  bool pass = true;
  double max_residual = 0.0;
  std::size_t n_max = 0;
};

/// P(k) (2 pi f_k c_{k,n}) against 2 pi (P(k) f_k) c_{k,n} for n = 0..n_max.
CommuteReport check_operator_commutes(const Ultrapolynomial& P, const CoefDistribution& f,
                                      const Mollifier& m, std::size_t n_max = 32);

}  // namespace perigen
