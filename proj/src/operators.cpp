#include "perigen/operators.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "perigen/error.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogEps = -36.8413614879;  // log 1e-16
constexpr double kLogMaxDouble = 709.78;
constexpr std::size_t kSeriesCap = std::size_t{1} << 22;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(std::min(a, b) - m));
}

// log sum_p e^{2p (log c + log|x|)} / W_{2p}, W given by the view.
double log_even_series(const WeightView& w, double log_c, double x) {
  if (x == 0.0) return -w.log_weight(0);
  const double lx = log_c + std::log(std::abs(x));
  const std::size_t cap = std::min(w.p_max(), kSeriesCap);
  double sum = -kInf;
  double prev = -kInf;
  for (std::size_t n = 0;; n += 2) {
    if (n > cap)
      throw NoConverge("series terms still significant at p = " + std::to_string(cap) +
                       " for x = " + std::to_string(x));
    const double t = double(n) * lx - w.log_weight(n);
    sum = log_add(sum, t);
    if (n > 0 && t < prev && t < sum + kLogEps) break;
    prev = t;
  }
  return sum;
}

// Sum of complex terms given as LogCoefs, returned in log form.
LogCoef log_sum(const std::vector<LogCoef>& terms) {
  double m = -kInf;
  for (const LogCoef& t : terms) m = std::max(m, t.log_abs);
  if (m == -kInf) return LogCoef::zero();
  cplx acc{};
  for (const LogCoef& t : terms)
    if (!t.is_zero()) acc += t.unit * std::exp(t.log_abs - m);
  LogCoef out = LogCoef::from(acc);
  if (!out.is_zero()) out.log_abs += m;
  return out;
}

cplx to_value(const LogCoef& z) {
  if (z.log_abs > kLogMaxDouble) throw Overflow("multiplier value exceeds double range");
  return z.value();
}

}  // namespace

std::vector<double> default_roumieu_l_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0}; }

Ultrapolynomial Ultrapolynomial::table(std::vector<cplx> a, const WeightSequence& ws,
                                       UltraClass cls,
                                       std::optional<std::pair<double, double>> beurling_lc,
                                       std::vector<std::pair<double, double>> roumieu_lc) {
  if (a.empty()) throw ClassFail("empty coefficient table");
  Ultrapolynomial P(Form::kTable, cls, ws);
  for (cplx z : a) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
      throw ClassFail("non-finite ultrapolynomial coefficient");
    P.a_.push_back(LogCoef::from(z));
  }
  P.certify(beurling_lc, std::move(roumieu_lc));
  return P;
}

Ultrapolynomial Ultrapolynomial::structure_beurling(double lambda, const WeightSequence& ws) {
  if (!(lambda > 0.0)) throw ClassFail("structure polynomial needs lambda > 0");
  Ultrapolynomial P(Form::kStructureBeurling, UltraClass::kBeurling, ws);
  P.lambda_ = lambda;
  const double log_c = std::log(lambda * ws.H() * ws.H());
  const std::size_t n_max = std::min(kStructureStoredTerms, ws.p_max());
  for (std::size_t n = 0; n <= n_max; ++n)
    P.a_.push_back(n % 2 ? LogCoef::zero() : LogCoef{double(n) * log_c - ws.log_weight(n)});
  P.certify(std::pair{lambda * ws.H() * ws.H(), 1.0}, {});
  return P;
}

Ultrapolynomial Ultrapolynomial::structure_roumieu(const RSequence& r1, const RSequence& k1,
                                                   const WeightSequence& ws) {
  Ultrapolynomial P(Form::kStructureRoumieu, UltraClass::kRoumieu, ws);
  P.r1_ = r1;
  P.k1_ = k1;
  const double log_c = std::log(2.0 * ws.H());
  const std::size_t n_max = std::min(kStructureStoredTerms, ws.p_max());
  const WeightView w1(ws, r1);
  const WeightView w2(ws, k1);
  auto b = [&](const WeightView& w, std::size_t n) {
    return n % 2 ? -kInf : double(n) * log_c - w.log_weight(n);
  };
  for (std::size_t n = 0; n <= n_max; ++n) {
    double s = -kInf;
    for (std::size_t m = 0; m <= n; ++m) s = log_add(s, b(w1, m) + b(w2, n - m));
    P.a_.push_back(s == -kInf ? LogCoef::zero() : LogCoef{s});
  }
  P.certify({}, {});
  return P;
}

void Ultrapolynomial::certify(std::optional<std::pair<double, double>> beurling_lc,
                              std::vector<std::pair<double, double>> roumieu_lc) {
  if (stored_degree() > ws_.p_max())
    throw ClassFail("coefficient table longer than the weight sequence");
  for (const LogCoef& z : a_)
    if (std::isnan(z.log_abs) || z.log_abs == kInf) throw ClassFail("non-finite coefficient");

  // log of the smallest C with |a_n| <= C L^n / M_n on the stored range.
  auto fit = [&](double L) {
    double c = -kInf;
    for (std::size_t n = 0; n < a_.size(); ++n)
      if (!a_[n].is_zero())
        c = std::max(c, a_[n].log_abs - double(n) * std::log(L) + ws_.log_weight(n));
    return c;
  };
  auto verify = [&](double L, double C) {
    if (!(L > 0.0) || !(C > 0.0)) throw ClassFail("class constants must be positive");
    for (std::size_t n = 0; n < a_.size(); ++n) {
      if (a_[n].is_zero()) continue;
      const double bound = std::log(C) + double(n) * std::log(L) - ws_.log_weight(n);
      if (a_[n].log_abs > bound + 1e-12 * (1.0 + std::abs(bound))) {
        std::ostringstream os;
        os << "|a_" << n << "| exceeds " << C << " * " << L << "^n / M_n";
        throw ClassFail(os.str());
      }
    }
  };

  if (cls_ == UltraClass::kBeurling) {
    if (beurling_lc) {
      L_ = beurling_lc->first;
      C_ = beurling_lc->second;
      verify(L_, C_);
    } else {
      C_ = std::exp(std::max(fit(L_), -kLogMaxDouble));
    }
    return;
  }
  c_table_.clear();
  if (!roumieu_lc.empty()) {
    for (const auto& [L, C] : roumieu_lc) verify(L, C);
    c_table_ = std::move(roumieu_lc);
    return;
  }
  for (double L : default_roumieu_l_grid()) {
    const double c = fit(L);
    if (c > kLogMaxDouble) throw ClassFail("C_L overflows for L = " + std::to_string(L));
    c_table_.push_back({L, std::exp(std::max(c, -kLogMaxDouble))});
  }
}

std::string Ultrapolynomial::describe() const {
  std::ostringstream os;
  switch (form_) {
    case Form::kTable: os << "table(degree=" << stored_degree() << ")"; break;
    case Form::kStructureBeurling: os << "structure_beurling(lambda=" << lambda_ << ")"; break;
    case Form::kStructureRoumieu: os << "structure_roumieu"; break;
  }
  os << " over " << ws_.label();
  return os.str();
}

LogCoef log_eval_ultrapoly(const Ultrapolynomial& P, double x) {
  const WeightSequence& ws = P.weights();
  switch (P.form()) {
    case Ultrapolynomial::Form::kStructureBeurling:
      return {log_even_series(WeightView(ws), std::log(P.lambda() * ws.H() * ws.H()), x)};
    case Ultrapolynomial::Form::kStructureRoumieu: {
      const double log_c = std::log(2.0 * ws.H());
      return {log_even_series(WeightView(ws, *P.r_prime()), log_c, x) +
              log_even_series(WeightView(ws, *P.k_prime()), log_c, x)};
    }
    case Ultrapolynomial::Form::kTable: break;
  }
  const auto& a = P.coefficients();
  if (x == 0.0) return a[0];
  const double lx = std::log(std::abs(x));
  std::vector<LogCoef> terms;
  terms.reserve(a.size());
  for (std::size_t n = 0; n < a.size(); ++n) {
    if (a[n].is_zero()) continue;
    const double sign = (x < 0.0 && n % 2 == 1) ? -1.0 : 1.0;
    terms.push_back({a[n].log_abs + double(n) * lx, a[n].unit * sign});
  }
  return log_sum(terms);
}

double eval_ultrapoly(const Ultrapolynomial& P, double x) {
  const LogCoef v = log_eval_ultrapoly(P, x);
  if (v.log_abs > kLogMaxDouble) return v.unit.real() >= 0.0 ? kInf : -kInf;
  return v.value().real();
}

TrigPoly apply_operator(const Ultrapolynomial& P, const TrigPoly& f) {
  TrigPoly out(f.degree());
  for (int k = -f.degree(); k <= f.degree(); ++k) {
    const cplx c = f.coef(k);
    if (c == cplx{}) continue;
    out.at(k) = to_value(log_eval_ultrapoly(P, double(k)) * LogCoef::from(c));
  }
  return out;
}

CoefDistribution apply_operator(const Ultrapolynomial& P, const CoefDistribution& f) {
  auto p = std::make_shared<const Ultrapolynomial>(P);
  return {CoefDistribution::Tag::kDerived,
          [p, f](long k) {
            const LogCoef c = f.log_coef(k);
            if (c.is_zero()) return c;
            return log_eval_ultrapoly(*p, double(k)) * c;
          },
          f.cls(), f.growth_lambda(), "P(D)" + f.label(), f.support()};
}

Net apply_operator(const Ultrapolynomial& P, const Net& f) {
  auto p = std::make_shared<const Ultrapolynomial>(P);
  return Net([p, f](std::size_t n) { return apply_operator(*p, f(n)); }, f.n_max(),
             "P(D)" + f.label(), f.is_constant());
}

Ultrapolynomial shifted_operator(const Ultrapolynomial& P, long k) {
  if (P.form() != Ultrapolynomial::Form::kTable)
    throw InvalidSpec("only finite tables can be shifted; use multiplier semantics");
  const auto& a = P.coefficients();
  const std::size_t N = a.size() - 1;
  const double lk = k == 0 ? -kInf : std::log(std::abs(double(k)));
  std::vector<cplx> b(N + 1);
  for (std::size_t m = 0; m <= N; ++m) {
    std::vector<LogCoef> terms;
    for (std::size_t n = m; n <= N; ++n) {
      if (a[n].is_zero()) continue;
      const std::size_t e = n - m;
      if (e > 0 && k == 0) continue;
      const double lbin = std::lgamma(double(n) + 1) - std::lgamma(double(m) + 1) -
                          std::lgamma(double(e) + 1);
      const double sign = (k < 0 && e % 2 == 1) ? -1.0 : 1.0;
      terms.push_back({a[n].log_abs + lbin + (e ? double(e) * lk : 0.0), a[n].unit * sign});
    }
    const LogCoef s = log_sum(terms);
    if (s.log_abs > kLogMaxDouble)
      throw Overflow("shifted coefficient " + std::to_string(m) + " exceeds double range");
    b[m] = s.value();
  }
  std::optional<std::pair<double, double>> none;
  return Ultrapolynomial::table(std::move(b), P.weights(), P.cls(), none, {});
}

Factorization structure_factorize(const CoefDistribution& c, const WeightSequence& ws,
                                  UltraClass cls, const FactorParams& params,
                                  const WeightSequence& target, long k_max, double tau) {
  const std::size_t rel_p = std::min<std::size_t>({256, ws.p_max(), target.p_max()});
  GrowthVerdict rel = relation(ws, target, RelationKind::kStrict, rel_p);
  if (!rel.bounded)
    throw RelationFail(ws.label() + " is not strictly below " + target.label() +
                       " (margin " + std::to_string(rel.margin) + ")");

  const RSequence r1 = params.r_prime.value_or(RSequence::linear());
  const RSequence k1 = params.k_prime.value_or(RSequence::linear());
  TailTest growth;
  std::optional<Ultrapolynomial> P;
  if (cls == UltraClass::kBeurling) {
    growth = coefficient_profile_test(c, WeightView(ws), params.lambda, SeminormSign::kMinus,
                                      k_max, tau);
    if (!growth.bounded)
      throw GrowthFail("sigma'_lambda sweep diverges (margin " + std::to_string(growth.margin) +
                       " at |k| = " + std::to_string(growth.witness) + ")");
    P = Ultrapolynomial::structure_beurling(params.lambda, ws);
  } else {
    growth = coefficient_profile_test(c, WeightView(ws, r1), 1.0, SeminormSign::kMinus, k_max,
                                      tau);
    if (!growth.bounded)
      throw GrowthFail("coefficients outgrow e^{M_{r'}(k)} (margin " +
                       std::to_string(growth.margin) + " at |k| = " +
                       std::to_string(growth.witness) + ")");
    P = Ultrapolynomial::structure_roumieu(r1, k1, ws);
  }

  // Structure symbols are even, so log P(k) depends on |k| only.
  auto log_p = std::make_shared<std::vector<double>>(std::size_t(k_max) + 1);
  for (long l = 0; l <= k_max; ++l) (*log_p)[std::size_t(l)] = log_eval_ultrapoly(*P, double(l)).log_abs;
  auto p_copy = std::make_shared<const Ultrapolynomial>(*P);
  CoefDistribution g(
      CoefDistribution::Tag::kDerived,
      [c, log_p, p_copy](long k) {
        const LogCoef ck = c.log_coef(k);
        if (ck.is_zero()) return ck;
        const std::size_t l = std::size_t(std::abs(k));
        const double lp = l < log_p->size() ? (*log_p)[l]
                                            : log_eval_ultrapoly(*p_copy, double(k)).log_abs;
        return ck * LogCoef{-lp};
      },
      c.cls(), c.growth_lambda(), "g", c.support());

  Factorization out{*P, g, growth, {}, {}, rel, 0.0, k_max};
  out.g_decay_m = cls == UltraClass::kBeurling
                      ? coefficient_profile_test(g, WeightView(ws), params.lambda,
                                                 SeminormSign::kPlus, k_max, tau)
                      : coefficient_profile_test(g, WeightView(ws, k1), 1.0,
                                                 SeminormSign::kPlus, k_max, tau);

  std::vector<Probe> probes;
  for (double h : core_grid()) {
    const TailTest t =
        coefficient_profile_test(g, WeightView(target), h, SeminormSign::kPlus, k_max, tau);
    probes.push_back({h, 0.0, t.margin, t.witness, t.bounded});
  }
  out.g_decay_n = fold_quantifiers(std::move(probes), core_grid().size(), Quantifier::kForAll,
                                   Quantifier::kForAll, tau);
  out.g_decay_n.outer_name = "h";
  out.g_decay_n.method = Method::kCoefficient;
  out.g_decay_n.test = "decay";

  const long K = c.support() ? std::min(*c.support(), k_max) : k_max;
  for (long k = -K; k <= K; ++k) {
    const LogCoef ck = c.log_coef(k);
    if (ck.is_zero()) continue;
    const LogCoef back = log_eval_ultrapoly(out.P, double(k)) * g.log_coef(k);
    const cplx ratio = std::exp(back.log_abs - ck.log_abs) * back.unit * std::conj(ck.unit);
    out.reconstruction_error = std::max(out.reconstruction_error, std::abs(ratio - 1.0));
  }
  return out;
}

LowerBoundReport lower_bound_check(const Ultrapolynomial& P, double lambda,
                                   std::span<const double> x_grid, double tau) {
  if (x_grid.empty()) throw InvalidSpec("empty x grid");
  LowerBoundReport r;
  const WeightSequence& ws = P.weights();
  std::vector<double> gap;
  r.log_c_prime = kInf;
  for (double x : x_grid) {
    const double lp = log_eval_ultrapoly(P, x).log_abs;
    double target;
    if (P.form() == Ultrapolynomial::Form::kStructureRoumieu)
      target = associated_detail(WeightView(ws, *P.r_prime()), x).value +
               associated_detail(WeightView(ws, *P.k_prime()), x).value;
    else
      target = 2.0 * associated_detail(WeightView(ws), lambda * x).value;
    r.x.push_back(x);
    r.log_p.push_back(lp);
    r.log_target.push_back(target);
    gap.push_back(target - lp);
    r.log_c_prime = std::min(r.log_c_prime, lp - target);
  }
  const TailTest t = bounded_tail(gap, head_index(gap.size() - 1), tau);
  r.pass = t.bounded;
  r.margin = t.margin;
  r.witness = t.witness;
  return r;
}

}  // namespace perigen
