#include "perigen/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace perigen {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double finite_or_inf(double x) { return std::isnan(x) ? kInf : x; }
}  // namespace

TailTest bounded_tail(std::span<const double> log_values, std::size_t head_end,
                      double tau) {
  TailTest out;
  if (log_values.empty()) return out;
  head_end = std::min(head_end, log_values.size() - 1);

  double baseline = -kInf;
  for (std::size_t i = 0; i <= head_end; ++i)
    baseline = std::max(baseline, finite_or_inf(log_values[i]));

  double tail = -kInf;
  out.witness = head_end;
  for (std::size_t i = head_end + 1; i < log_values.size(); ++i) {
    const double v = finite_or_inf(log_values[i]);
    if (v > tail) {
      tail = v;
      out.witness = i;
    }
  }

  if (tail == -kInf) {
    out.margin = -kInf;
  } else if (baseline == -kInf) {
    out.margin = kInf;
  } else {
    out.margin = tail - baseline;
  }
  out.bounded = out.margin <= tau;
  return out;
}

std::size_t head_index(std::size_t n_max) { return std::max<std::size_t>(8, n_max / 8); }

TailTest bounded_test(std::span<const double> log_values, double tau) {
  const std::size_t n_max = log_values.empty() ? 0 : log_values.size() - 1;
  return bounded_tail(log_values, head_index(n_max), tau);
}

std::string to_string(Method m) {
  switch (m) {
    case Method::kFullNorm: return "full_norm";
    case Method::kSupNorm: return "sup_norm";
    case Method::kCoefficient: return "coefficient";
    case Method::kRjFamily: return "rj_family";
    case Method::kSequence: return "sequence";
  }
  return "unknown";
}

GrowthVerdict fold_quantifiers(std::vector<Probe> probes, std::size_t outer_count,
                               Quantifier outer, Quantifier inner, double tau) {
  if (outer_count == 0 || probes.empty() || probes.size() % outer_count != 0)
    throw std::invalid_argument("fold_quantifiers: probe table shape mismatch");
  const std::size_t inner_count = probes.size() / outer_count;

  GrowthVerdict v;
  v.outer = outer;
  v.inner = inner;
  v.tau = tau;

  // Inner fold per row: forall -> worst (max) margin, exists -> best (min).
  std::vector<std::size_t> row_pick(outer_count);
  for (std::size_t i = 0; i < outer_count; ++i) {
    std::size_t pick = i * inner_count;
    for (std::size_t j = 0; j < inner_count; ++j) {
      const std::size_t idx = i * inner_count + j;
      const bool better = inner == Quantifier::kForAll ? probes[idx].margin > probes[pick].margin
                                                       : probes[idx].margin < probes[pick].margin;
      if (better) pick = idx;
    }
    row_pick[i] = pick;
  }
  std::size_t pick = row_pick[0];
  for (std::size_t i = 1; i < outer_count; ++i) {
    const std::size_t idx = row_pick[i];
    const bool better = outer == Quantifier::kForAll ? probes[idx].margin > probes[pick].margin
                                                     : probes[idx].margin < probes[pick].margin;
    if (better) pick = idx;
  }

  v.decisive = pick;
  v.margin = probes[pick].margin;
  v.witness_n = probes[pick].witness_n;
  v.bounded = v.margin <= tau;
  v.grid = std::move(probes);
  return v;
}

}  // namespace perigen
