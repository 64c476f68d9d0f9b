#pragma once

// Ultrapolynomials P(z) = sum a_n z^n and the operators P(D) acting as
// Fourier multipliers c_k -> P(k) c_k.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "perigen/algebra.hpp"
#include "perigen/growth.hpp"
#include "perigen/series.hpp"
#include "perigen/weights.hpp"

namespace perigen {

/// Coefficients stored for closed forms (class certification range).
inline constexpr std::size_t kStructureStoredTerms = 64;
inline constexpr long kDefaultFactorKMax = 200;

class Ultrapolynomial {
 public:
  enum class Form { kTable, kStructureBeurling, kStructureRoumieu };

  /// Finite table a_0..a_N.  Beurling: |a_n| <= C L^n / M_n is verified for
  /// the supplied (L, C), or C is fitted with L = 1.  Roumieu: C_L is fitted
  /// (or verified) for each L of the table.
  static Ultrapolynomial table(std::vector<cplx> a, const WeightSequence& ws, UltraClass cls,
                               std::optional<std::pair<double, double>> beurling_lc = {},
                               std::vector<std::pair<double, double>> roumieu_lc = {});

  /// sum_p (lambda H^2 z)^{2p} / M_{2p}.
  static Ultrapolynomial structure_beurling(double lambda, const WeightSequence& ws);
  /// P_1 P_2 with P_i(z) = sum_p (2Hz)^{2p} / (prod_{j<=2p} r_j M_{2p}) for
  /// r = r' and r = k' respectively.
  static Ultrapolynomial structure_roumieu(const RSequence& r1, const RSequence& k1,
                                           const WeightSequence& ws);

  Form form() const { return form_; }
  UltraClass cls() const { return cls_; }
  const WeightSequence& weights() const { return ws_; }
  /// Stored coefficients (the whole table, or the first terms of a closed form).
  const std::vector<LogCoef>& coefficients() const { return a_; }
  std::size_t stored_degree() const { return a_.empty() ? 0 : a_.size() - 1; }
  double L() const { return L_; }
  double C() const { return C_; }
  /// (L, C_L) pairs of a Roumieu certificate.
  const std::vector<std::pair<double, double>>& roumieu_constants() const { return c_table_; }
  double lambda() const { return lambda_; }
  const std::optional<RSequence>& r_prime() const { return r1_; }
  const std::optional<RSequence>& k_prime() const { return k1_; }
  std::string describe() const;

 private:
  Ultrapolynomial(Form form, UltraClass cls, WeightSequence ws)
      : form_(form), cls_(cls), ws_(std::move(ws)) {}
  void certify(std::optional<std::pair<double, double>> beurling_lc,
               std::vector<std::pair<double, double>> roumieu_lc);

  Form form_;
  UltraClass cls_;
  WeightSequence ws_;
  std::vector<LogCoef> a_;
  double L_ = 1.0;
  double C_ = 1.0;
  std::vector<std::pair<double, double>> c_table_;
  double lambda_ = 0.0;
  std::optional<RSequence> r1_;
  std::optional<RSequence> k1_;
};

/// L grid of Roumieu certificates when none is supplied.
std::vector<double> default_roumieu_l_grid();

/// P(x) in log-magnitude/phase form.  Closed forms are summed until the
/// terms decrease below 1e-16 of the running sum; NoConverge past P_max.
LogCoef log_eval_ultrapoly(const Ultrapolynomial& P, double x);
/// Real part of P(x) (inf when it overflows).
double eval_ultrapoly(const Ultrapolynomial& P, double x);

TrigPoly apply_operator(const Ultrapolynomial& P, const TrigPoly& f);
CoefDistribution apply_operator(const Ultrapolynomial& P, const CoefDistribution& f);
Net apply_operator(const Ultrapolynomial& P, const Net& f);

/// z -> P(z + k) for a finite table.
Ultrapolynomial shifted_operator(const Ultrapolynomial& P, long k);

struct Factorization {
  Ultrapolynomial P;
  CoefDistribution g;
  TailTest input_growth;     // sigma'-type sweep of the input
  TailTest g_decay_m;        // g in s^{M_p} (Beurling: some h)
  GrowthVerdict g_decay_n;   // g in s^{(N_p)}: every h of the core grid
  GrowthVerdict relation;    // M_p strictly below N_p
  double reconstruction_error = 0.0;  // max_k |P(k) g_k / c_k - 1|
  long k_max = 0;
};

struct FactorParams {
  double lambda = 1.0;                    // Beurling
  std::optional<RSequence> r_prime;       // Roumieu, default j + 1
  std::optional<RSequence> k_prime;       // Roumieu, default j + 1
};

/// c = P(D) g with P built from the structure formulas.
Factorization structure_factorize(const CoefDistribution& c, const WeightSequence& ws,
                                  UltraClass cls, const FactorParams& params,
                                  const WeightSequence& target,
                                  long k_max = kDefaultFactorKMax, double tau = kDefaultTau);

struct LowerBoundReport {
  bool pass = false;
  double log_c_prime = 0.0;  // min over the grid of log P(x) - target(x)
  double margin = 0.0;       // tail rule on target(x) - log P(x)
  std::size_t witness = 0;
  std::vector<double> x;
  std::vector<double> log_p;
  std::vector<double> log_target;
};

/// Fits P(x) >= C' e^{2M(lambda x)} (Beurling) or C' e^{M_{r'}(x) + M_{k'}(x)}
/// (Roumieu) on the grid; passes when target - log P stays bounded.
LowerBoundReport lower_bound_check(const Ultrapolynomial& P, double lambda,
                                   std::span<const double> x_grid, double tau = kDefaultTau);

}  // namespace perigen
