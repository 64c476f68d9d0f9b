#include "perigen/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "perigen/error.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double tol_for(double a, double b) { return 1e-12 * (1.0 + std::abs(a) + std::abs(b)); }

// E(s) = max_{p+q=s} (log M_{s} - log M_p - log M_q), s = 0..P.
std::vector<double> m2_profile(const std::vector<double>& log_m) {
  const std::size_t P = log_m.size() - 1;
  std::vector<double> e(P + 1, -kInf);
  for (std::size_t s = 0; s <= P; ++s)
    for (std::size_t p = 0; p <= s / 2; ++p)
      e[s] = std::max(e[s], log_m[s] - log_m[p] - log_m[s - p]);
  return e;
}

double max_excess(const std::vector<double>& profile, double log_h, std::size_t upto) {
  double m = -kInf;
  for (std::size_t s = 0; s <= upto; ++s) m = std::max(m, profile[s] - double(s) * log_h);
  return m;
}

}  // namespace

WeightSequence WeightSequence::gevrey(double s, std::size_t p_max) {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidSpec("gevrey exponent must be positive");
  if (p_max < 8) throw InvalidSpec("p_max must be at least 8");
  WeightSequence ws;
  ws.kind_ = Kind::kGevrey;
  ws.s_ = s;
  ws.p_max_ = p_max;
  ws.A_ = 1.0;
  ws.H_ = std::pow(2.0, s);
  std::ostringstream os;
  os << "gevrey(" << s << ")";
  ws.label_ = os.str();
  ws.certify_shape(std::min(p_max, kCertifyRange));
  return ws;
}

WeightSequence WeightSequence::table(std::vector<double> log_m, std::optional<double> A,
                                     std::optional<double> H, std::string label) {
  if (log_m.size() < 9) throw InvalidSpec("weight table needs p_max >= 8");
  if (std::abs(log_m[0]) > 1e-12) throw InvalidSpec("weight table must start with log M_0 = 0");
  for (double v : log_m)
    if (!std::isfinite(v)) throw InvalidSpec("weight table entries must be finite");
  if (A.has_value() != H.has_value()) throw InvalidSpec("A and H must be given together");

  WeightSequence ws;
  ws.kind_ = Kind::kTable;
  ws.log_m_ = std::move(log_m);
  ws.log_m_[0] = 0.0;
  ws.p_max_ = ws.log_m_.size() - 1;
  ws.label_ = std::move(label);
  ws.certify_shape(ws.p_max_);

  const auto profile = m2_profile(ws.log_m_);
  const std::size_t P = ws.p_max_;
  if (A) {
    if (*A < 1.0 || *H < 1.0) throw InvalidSpec("(M.2) constants must satisfy A, H >= 1");
    const double ex = max_excess(profile, std::log(*H), P);
    if (ex > std::log(*A) + 1e-9) {
      std::ostringstream os;
      os << "(M.2) fails with A=" << *A << ", H=" << *H << ": excess " << ex;
      throw CertificationFail(os.str());
    }
    ws.A_ = *A;
    ws.H_ = *H;
    return ws;
  }

  // A grid value of H "works" when the (M.2) excess has stabilised: the
  // maximum over p+q <= P equals the maximum over p+q <= P/2.
  bool found = false;
  double best_log_a = kInf;
  for (int k = 0; k <= 16; ++k) {
    const double log_h = 0.25 * k * std::log(2.0);
    const double full = max_excess(profile, log_h, P);
    const double half = max_excess(profile, log_h, P / 2);
    if (full > half + 1e-9) continue;
    const double log_a = std::max(0.0, full);
    if (log_a < best_log_a - 1e-12) {
      best_log_a = log_a;
      ws.A_ = std::exp(log_a);
      ws.H_ = std::exp(log_h);
      found = true;
    }
  }
  if (!found) throw CertificationFail("no H in {2^(k/4)} certifies (M.2) up to p_max");
  return ws;
}

void WeightSequence::certify_shape(std::size_t upto) const {
  for (std::size_t p = 1; p + 1 <= upto; ++p) {
    const double l = 2.0 * log_weight(p);
    const double r = log_weight(p - 1) + log_weight(p + 1);
    if (l > r + tol_for(l, r)) {
      std::ostringstream os;
      os << "(M.1) fails at p=" << p;
      throw InvalidSpec(os.str());
    }
  }
  if (!(log_ratio(upto) > std::log(2.0) + log_ratio(1)))
    throw DivergenceFail("ratios m_p do not grow: m_{p_max} <= 2 m_1");
}

double WeightSequence::log_weight(std::size_t p) const {
  if (kind_ == Kind::kGevrey) return s_ * std::lgamma(double(p) + 1.0);
  return log_m_[std::min(p, p_max_)];
}

double WeightSequence::log_ratio(std::size_t p) const {
  if (p == 0) return 0.0;
  if (kind_ == Kind::kGevrey) return s_ * std::log(double(p));
  p = std::min(p, p_max_);
  return log_m_[p] - log_m_[p - 1];
}

WeightSequence WeightSequence::with_p_max(std::size_t p_max) const {
  if (kind_ != Kind::kGevrey) {
    if (p_max <= p_max_) return *this;
    throw InvalidSpec("table weight sequences cannot be extended");
  }
  return gevrey(s_, p_max);
}

RSequence RSequence::linear() { return RSequence{}; }

RSequence RSequence::power(double alpha) {
  if (!(alpha > 0.0)) throw InvalidSpec("r-sequence power must be positive");
  RSequence r;
  r.kind_ = Kind::kPower;
  r.alpha_ = alpha;
  return r;
}

RSequence RSequence::table(std::vector<double> values) {
  if (values.size() < 3) throw InvalidSpec("r-sequence table needs at least 3 entries");
  if (std::abs(values[0] - 1.0) > 1e-12) throw InvalidSpec("r-sequence must start with r_0 = 1");
  for (std::size_t j = 1; j < values.size(); ++j)
    if (!(values[j] >= values[j - 1])) throw InvalidSpec("r-sequence must be non-decreasing");
  if (!(values.back() > 2.0 * values[1]))
    throw DivergenceFail("r-sequence does not grow: r_J <= 2 r_1");
  RSequence r;
  r.kind_ = Kind::kTable;
  r.r_ = std::move(values);
  r.r_[0] = 1.0;
  r.log_prefix_.resize(r.r_.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < r.r_.size(); ++j) {
    acc += std::log(r.r_[j]);
    r.log_prefix_[j] = acc;
  }
  return r;
}

double RSequence::log_r(std::size_t j) const {
  switch (kind_) {
    case Kind::kLinear: return std::log(double(j) + 1.0);
    case Kind::kPower: return alpha_ * std::log(double(j) + 1.0);
    case Kind::kTable: return std::log(r_[std::min(j, r_.size() - 1)]);
  }
  return 0.0;
}

double RSequence::log_prod(std::size_t p) const {
  switch (kind_) {
    case Kind::kLinear: return std::lgamma(double(p) + 2.0);
    case Kind::kPower: return alpha_ * std::lgamma(double(p) + 2.0);
    case Kind::kTable: {
      const std::size_t J = r_.size() - 1;
      if (p <= J) return log_prefix_[p];
      return log_prefix_[J] + double(p - J) * std::log(r_[J]);
    }
  }
  return 0.0;
}

AssocValue associated_detail(const WeightView& w, double t) {
  t = std::abs(t);
  AssocValue out;
  if (t == 0.0) return out;
  const double lt = std::log(t);
  // Ratio formula: with non-decreasing ratios m_p the sup is attained at
  // p* = #{p >= 1 : m_p <= t}, and sum_{p <= p*} log(t / m_p) telescopes to
  // p* log t - log M_{p*}.
  std::size_t lo = 0;
  std::size_t hi = w.p_max();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (w.log_ratio(mid) <= lt)
      lo = mid;
    else
      hi = mid - 1;
  }
  out.argmax_p = lo;
  out.value = lo == 0 ? 0.0 : std::max(0.0, double(lo) * lt - w.log_weight(lo));
  out.truncated = lo > 0 && lo == w.p_max();
  return out;
}

double associated_function(const WeightSequence& ws, double t) {
  return associated_detail(WeightView(ws), t).value;
}

double associated_function_rj(const WeightSequence& ws, const RSequence& rs, double t) {
  return associated_detail(WeightView(ws, rs), t).value;
}

Lemma2MReport check_lemma_2M(const WeightSequence& ws, std::span<const double> t_grid) {
  Lemma2MReport rep;
  rep.max_excess = -kInf;
  const double log_a = std::log(ws.A());
  for (double t : t_grid) {
    const double lhs = 2.0 * associated_function(ws, t);
    const double rhs = associated_function(ws, ws.H() * t) + log_a;
    rep.rows.push_back({t, lhs, rhs});
    if (lhs - rhs > rep.max_excess) {
      rep.max_excess = lhs - rhs;
      rep.argmax_t = t;
    }
  }
  if (rep.rows.empty()) rep.max_excess = 0.0;
  rep.pass = rep.max_excess <= 1e-9;
  return rep;
}

std::vector<double> default_relation_h_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

GrowthVerdict relation(std::span<const double> log_m, std::span<const double> log_n,
                       RelationKind kind, std::span<const double> h_grid, double tau) {
  const std::size_t len = std::min(log_m.size(), log_n.size());
  if (len < 2 || h_grid.empty()) throw InvalidSpec("relation needs two sequences and an h grid");
  std::vector<Probe> probes;
  std::vector<double> d(len);
  for (double h : h_grid) {
    const double lh = std::log(h);
    for (std::size_t p = 0; p < len; ++p) d[p] = log_m[p] - log_n[p] - double(p) * lh;
    // A sequence in p: the head is the first half of the range.
    const TailTest tt = bounded_tail(d, (len - 1) / 2, tau);
    probes.push_back({h, 0.0, tt.margin, tt.witness, tt.bounded});
  }
  auto v = fold_quantifiers(std::move(probes), h_grid.size(),
                            kind == RelationKind::kStrict ? Quantifier::kForAll
                                                          : Quantifier::kExists,
                            Quantifier::kForAll, tau);
  v.outer_name = "h";
  v.inner_name = "";
  v.method = Method::kSequence;
  v.test = kind == RelationKind::kStrict ? "strict" : "subset";
  return v;
}

std::vector<double> log_weight_table(const WeightSequence& ws, std::size_t p_max) {
  p_max = std::min(p_max, ws.p_max());
  std::vector<double> out(p_max + 1);
  for (std::size_t p = 0; p <= p_max; ++p) out[p] = ws.log_weight(p);
  return out;
}

GrowthVerdict relation(const WeightSequence& m, const WeightSequence& n, RelationKind kind,
                       std::size_t p_max, std::span<const double> h_grid, double tau) {
  const auto lm = log_weight_table(m, p_max);
  const auto ln = log_weight_table(n, p_max);
  return relation(lm, ln, kind, h_grid, tau);
}

GrowthVerdict relation(const WeightSequence& m, const WeightSequence& n, RelationKind kind,
                       std::size_t p_max) {
  const auto grid = default_relation_h_grid();
  return relation(m, n, kind, p_max, grid);
}

}  // namespace perigen
