#pragma once

// Weight sequences M_p (stored as log M_p), their associated functions and
// the inclusion relations between them.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "perigen/growth.hpp"

namespace perigen {

/// Evaluation horizon for closed-form sequences when none is requested.
inline constexpr std::size_t kDefaultGevreyPMax = std::size_t{1} << 30;
/// Upper end of the range on which invariants of closed forms are re-checked.
inline constexpr std::size_t kCertifyRange = 4096;

class WeightSequence {
 public:
  enum class Kind { kGevrey, kTable };

  /// M_p = p!^s with the analytic (M.2) constants A = 1, H = 2^s.
  static WeightSequence gevrey(double s, std::size_t p_max = kDefaultGevreyPMax);

  /// Explicit table of log M_p, p = 0..size-1.  Without (A, H) the constants
  /// are found by a grid search over H = 2^{k/4}, k = 0..16.
  static WeightSequence table(std::vector<double> log_m, std::optional<double> A = std::nullopt,
                              std::optional<double> H = std::nullopt, std::string label = "table");

  Kind kind() const { return kind_; }
  double gevrey_exponent() const { return s_; }
  std::size_t p_max() const { return p_max_; }
  double A() const { return A_; }
  double H() const { return H_; }
  const std::string& label() const { return label_; }

  /// log M_p for p <= p_max.
  double log_weight(std::size_t p) const;
  /// log m_p = log(M_p / M_{p-1}) for 1 <= p <= p_max.
  double log_ratio(std::size_t p) const;

  /// Same sequence with a different evaluation horizon (closed forms only).
  WeightSequence with_p_max(std::size_t p_max) const;

 private:
  WeightSequence() = default;
  void certify_shape(std::size_t upto) const;

  Kind kind_ = Kind::kGevrey;
  double s_ = 1.0;
  std::vector<double> log_m_;
  std::size_t p_max_ = 0;
  double A_ = 1.0;
  double H_ = 2.0;
  std::string label_;
};

/// Non-decreasing r_j with r_0 = 1; tables are continued by their last entry.
class RSequence {
 public:
  enum class Kind { kLinear, kPower, kTable };

  /// r_j = j + 1.
  static RSequence linear();
  /// r_j = (j + 1)^alpha, alpha > 0.
  static RSequence power(double alpha);
  static RSequence table(std::vector<double> r);

  Kind kind() const { return kind_; }
  double alpha() const { return alpha_; }
  const std::vector<double>& values() const { return r_; }

  double log_r(std::size_t j) const;
  /// log prod_{j=0}^{p} r_j.
  double log_prod(std::size_t p) const;

  bool operator==(const RSequence& o) const {
    return kind_ == o.kind_ && alpha_ == o.alpha_ && r_ == o.r_;
  }

 private:
  RSequence() = default;

  Kind kind_ = Kind::kLinear;
  double alpha_ = 1.0;
  std::vector<double> r_;
  std::vector<double> log_prefix_;
};

/// M_p, or M_p * prod_{j<=p} r_j when an r-sequence is attached.
class WeightView {
 public:
  explicit WeightView(const WeightSequence& ws) : ws_(&ws) {}
  WeightView(const WeightSequence& ws, const RSequence& rs) : ws_(&ws), rs_(&rs) {}

  double log_weight(std::size_t p) const {
    return ws_->log_weight(p) + (rs_ ? rs_->log_prod(p) : 0.0);
  }
  double log_ratio(std::size_t p) const {
    return ws_->log_ratio(p) + (rs_ ? rs_->log_r(p) : 0.0);
  }
  std::size_t p_max() const { return ws_->p_max(); }

 private:
  const WeightSequence* ws_;
  const RSequence* rs_ = nullptr;
};

struct AssocValue {
  double value = 0.0;
  std::size_t argmax_p = 0;
  bool truncated = false;  // the maximizing p sits at p_max
};

/// M(t) = sup_{p <= p_max} (p log t - log M_p), extended evenly to t <= 0.
AssocValue associated_detail(const WeightView& w, double t);
double associated_function(const WeightSequence& ws, double t);
double associated_function_rj(const WeightSequence& ws, const RSequence& rs, double t);

struct Lemma2MRow {
  double t;
  double lhs;  // 2 M(t)
  double rhs;  // M(H t) + log A
};

struct Lemma2MReport {
  std::vector<Lemma2MRow> rows;
  double max_excess = 0.0;
  double argmax_t = 0.0;
  bool pass = true;
};

Lemma2MReport check_lemma_2M(const WeightSequence& ws, std::span<const double> t_grid);

enum class RelationKind { kSubset, kStrict };

std::vector<double> default_relation_h_grid();

/// M_p subset N_p (some h) or M_p strictly below N_p (every h), decided by
/// boundedness of log M_p - log N_p - p log h over p <= p_max.
GrowthVerdict relation(std::span<const double> log_m, std::span<const double> log_n,
                       RelationKind kind, std::span<const double> h_grid,
                       double tau = kDefaultTau);
GrowthVerdict relation(const WeightSequence& m, const WeightSequence& n, RelationKind kind,
                       std::size_t p_max, std::span<const double> h_grid,
                       double tau = kDefaultTau);
GrowthVerdict relation(const WeightSequence& m, const WeightSequence& n, RelationKind kind,
                       std::size_t p_max);

std::vector<double> log_weight_table(const WeightSequence& ws, std::size_t p_max);

}  // namespace perigen
