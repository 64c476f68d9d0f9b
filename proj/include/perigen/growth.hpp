#pragma once

// Desk-scale boundedness decisions.
//
// Every "sup_n a_n < infinity" condition is decided from finitely many
// indices by comparing the tail of log a_n against a head baseline.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace perigen {

inline constexpr double kDefaultTau = 0.5;

struct TailTest {
  bool bounded = true;
  double margin = 0.0;      // tail max minus head baseline (log scale)
  std::size_t witness = 0;  // argmax of the tail
};

/// Head is [0, head_end], tail is (head_end, size).  Entries equal to -inf
/// satisfy every bound.
TailTest bounded_tail(std::span<const double> log_values, std::size_t head_end,
                      double tau = kDefaultTau);

/// Head end used for nets indexed 0..n_max: max(8, n_max / 8).
std::size_t head_index(std::size_t n_max);

/// bounded_tail with the net head rule.
TailTest bounded_test(std::span<const double> log_values, double tau = kDefaultTau);

enum class Quantifier { kForAll, kExists };

enum class Method { kFullNorm, kSupNorm, kCoefficient, kRjFamily, kSequence };

std::string to_string(Method m);

/// One evaluated parameter pair of a quantified test.
struct Probe {
  double a = 0.0;  // outer parameter
  double b = 0.0;  // inner parameter
  double margin = 0.0;
  std::size_t witness_n = 0;
  bool bounded = true;
};

struct GrowthVerdict {
  bool bounded = true;
  double margin = 0.0;
  std::size_t witness_n = 0;
  std::string outer_name;
  std::string inner_name;
  Quantifier outer = Quantifier::kForAll;
  Quantifier inner = Quantifier::kExists;
  std::vector<Probe> grid;
  std::size_t decisive = 0;  // index into grid of the probe that fixed the verdict
  Method method = Method::kFullNorm;
  std::string test;  // "moderate", "negligible", "subset", ...
  double tau = kDefaultTau;
};

/// Folds a row-major outer x inner table of probes under the quantifier
/// pattern.  A pattern such as (forall, exists) reads "for every outer value
/// some inner value is bounded"; the margin is max over outer of min over
/// inner, and so on.
GrowthVerdict fold_quantifiers(std::vector<Probe> probes, std::size_t outer_count,
                               Quantifier outer, Quantifier inner, double tau);

}  // namespace perigen
