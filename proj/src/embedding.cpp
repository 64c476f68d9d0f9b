#include "perigen/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "perigen/error.hpp"
#include "perigen/regularity.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kInvTwoPi = 1.0 / kTwoPi;
constexpr double kLogMaxDouble = 709.78;
// Grid spacing for the checks on a cutoff profile.
constexpr double kPsiStep = 1.0 / 1024.0;
constexpr double kPsiTol = 1e-15;

cplx origin_weight(long k) { return k == 0 ? cplx{1.0} : cplx{}; }

std::string witness(const char* clause, long k, std::size_t n) {
  std::ostringstream os;
  os << clause << " clause violated at (k, n) = (" << k << ", " << n << ")";
  return os.str();
}

}  // namespace

Mollifier Mollifier::dirichlet() {
  Mollifier m;
  m.kind_ = Kind::kDirichlet;
  m.w_ = [](long k, std::size_t n) {
    if (n == 0) return origin_weight(k);
    return std::abs(k) <= long(n) ? cplx{1.0} : cplx{};
  };
  m.C_ = kInvTwoPi;
  m.R_ = 2.0;
  m.r_ = 1.0;
  m.descriptor_ = "dirichlet";
  return m;
}

Mollifier Mollifier::cutoff(std::function<double(double)> psi, double r, double R,
                            std::string descriptor) {
  if (!psi) throw InvalidSpec("empty cutoff");
  if (!(r > 0.0) || !(R > r)) throw InvalidSpec("cutoff needs 0 < r < R");
  // Continuity, support and plateau on a grid covering [-R - 1, R + 1].
  double C = 0.0;
  double prev = psi(-R - 1.0);
  const double jump = kInvTwoPi / 16.0;
  for (double x = -R - 1.0; x <= R + 1.0; x += kPsiStep) {
    const double v = psi(x);
    if (!std::isfinite(v)) throw MollifierFail("cutoff is not finite at x = " + std::to_string(x));
    if (std::abs(v - prev) > jump)
      throw MollifierFail("cutoff is not continuous near x = " + std::to_string(x));
    if (std::abs(x) >= R && v != 0.0)
      throw MollifierFail("cutoff does not vanish at x = " + std::to_string(x));
    if (std::abs(x) <= r && std::abs(v - kInvTwoPi) > kPsiTol)
      throw MollifierFail("cutoff is not 1/(2 pi) at x = " + std::to_string(x));
    C = std::max(C, std::abs(v));
    prev = v;
  }
  Mollifier m;
  m.kind_ = Kind::kCutoff;
  m.w_ = [psi, r](long k, std::size_t n) {
    if (n == 0) return origin_weight(k);
    if (double(std::abs(k)) <= r * double(n)) return cplx{1.0};
    return cplx{kTwoPi * psi(double(k) / double(n))};
  };
  m.C_ = C;
  m.R_ = R;
  m.r_ = r;
  m.descriptor_ = std::move(descriptor);
  m.verify();
  return m;
}

Mollifier Mollifier::trapezoid(double r, double R) {
  if (!(r > 0.0) || !(R > r)) throw InvalidSpec("trapezoid needs 0 < r < R");
  auto psi = [r, R](double x) {
    const double a = std::abs(x);
    if (a <= r) return kInvTwoPi;
    if (a >= R) return 0.0;
    return kInvTwoPi * (R - a) / (R - r);
  };
  std::ostringstream os;
  os << "cutoff:trapezoid:r=" << r << ":R=" << R;
  return cutoff(psi, r, R, os.str());
}

Mollifier Mollifier::table(std::map<std::size_t, std::vector<cplx>> rows, double C, double R,
                           double r) {
  if (rows.empty()) throw InvalidSpec("mollifier table has no rows");
  if (!(C > 0.0) || !(r > 0.0) || !(R > r)) throw InvalidSpec("mollifier table needs C > 0, 0 < r < R");
  std::size_t expect = 1;
  for (const auto& [n, row] : rows) {
    if (n != expect) throw InvalidSpec("mollifier rows must be n = 1, 2, ... without gaps");
    if (row.size() % 2 == 0) throw InvalidSpec("mollifier row of even length at n = " + std::to_string(n));
    ++expect;
  }
  auto shared = std::make_shared<const std::map<std::size_t, std::vector<cplx>>>(std::move(rows));
  Mollifier m;
  m.kind_ = Kind::kTable;
  m.rows_ = shared->rbegin()->first;
  m.w_ = [shared](long k, std::size_t n) {
    if (n == 0) return origin_weight(k);
    auto it = shared->find(n);
    if (it == shared->end()) throw InvalidSpec("mollifier table has no row n = " + std::to_string(n));
    const long K = long(it->second.size() / 2);
    if (std::abs(k) > K) return cplx{};
    const cplx c = it->second[std::size_t(k + K)];
    return c == cplx{kInvTwoPi} ? cplx{1.0} : kTwoPi * c;
  };
  m.C_ = C;
  m.R_ = R;
  m.r_ = r;
  m.descriptor_ = "table";
  m.verify(std::min(kDefaultMollifierProbe, m.rows_));
  return m;
}

cplx Mollifier::coef(long k, std::size_t n) const {
  const cplx w = w_(k, n);
  return w == cplx{1.0} ? cplx{kInvTwoPi} : w * kInvTwoPi;
}

int Mollifier::degree(std::size_t n) const {
  if (n == 0) return 0;
  switch (kind_) {
    case Kind::kDirichlet:
      return int(n);
    case Kind::kCutoff:
      return std::max(0, int(std::ceil(R_ * double(n))) - 1);
    case Kind::kTable: {
      int d = 0;
      // Rows are centred, so the first nonzero weight from the outside fixes the degree.
      for (int k = int(std::ceil(R_ * double(n))) + 1; k > 0; --k)
        if (w_(k, n) != cplx{} || w_(-k, n) != cplx{}) {
          d = k;
          break;
        }
      return d;
    }
  }
  return 0;
}

TrigPoly Mollifier::phi(std::size_t n) const {
  const int d = degree(n);
  TrigPoly out(d);
  for (int k = -d; k <= d; ++k) out.at(k) = coef(k, n);
  return out;
}

void Mollifier::verify(std::size_t n_probe) const {
  if (kind_ == Kind::kTable) n_probe = std::min(n_probe, rows_);
  const long K = long(std::ceil(R_ * double(n_probe)));
  for (std::size_t n = 1; n <= n_probe; ++n) {
    for (long k = -K; k <= K; ++k) {
      const cplx c = coef(k, n);
      const double ak = double(std::abs(k));
      if (std::abs(c) > C_ * (1.0 + 1e-12)) throw MollifierFail(witness("bound", k, n));
      if (ak >= R_ * double(n) && c != cplx{}) throw MollifierFail(witness("support", k, n));
      if (ak <= r_ * double(n) && std::abs(c - kInvTwoPi) > kPsiTol)
        throw MollifierFail(witness("plateau", k, n));
    }
  }
}

Net embed(const CoefDistribution& f, const Mollifier& m, std::size_t n_max) {
  auto gen = [f, m](std::size_t n) {
    int d = m.degree(n);
    if (f.support()) d = int(std::min<long>(d, *f.support()));
    TrigPoly out(d);
    for (int k = -d; k <= d; ++k) {
      const cplx w = m.weight(k, n);
      if (w == cplx{}) continue;
      const LogCoef lc = f.log_coef(k);
      if (lc.is_zero()) continue;
      if (w == cplx{1.0}) {
        if (lc.log_abs > kLogMaxDouble) throw Overflow("embedded coefficient exceeds double range");
        out.at(k) = f.coef(k);
      } else {
        const LogCoef z = lc * LogCoef::from(w);
        if (z.log_abs > kLogMaxDouble) throw Overflow("embedded coefficient exceeds double range");
        out.at(k) = z.value();
      }
    }
    return out;
  };
  return make_net(gen, n_max, "iota(" + f.label() + ")");
}

Net const_embed(const TrigPoly& f, std::size_t n_max) {
  return constant_net(f, n_max, "sigma");
}

ConstEmbedding const_embed(const CoefDistribution& f, const WeightSequence& ws, UltraClass cls,
                           std::size_t n_max, long k_max, double tail_tol) {
  ConstEmbedding out{constant_net(TrigPoly::zero(), std::max(n_max, kMinNetLength)),
                     TrigPoly::zero(), 0.0, coefficient_decay_class(f, ws, cls)};
  if (!out.decay.bounded)
    throw DecayFail("coefficients of " + f.label() + " do not decay in the " + to_string(cls) +
                    " class");
  const long K = f.support() ? std::min(*f.support(), k_max) : k_max;
  std::vector<double> level(std::size_t(K) + 1, -kInf);
  double top = -kInf;
  for (long l = 0; l <= K; ++l) {
    level[std::size_t(l)] = std::max(f.log_coef(l).log_abs, f.log_coef(-l).log_abs);
    top = std::max(top, level[std::size_t(l)]);
  }
  long d = 0;
  if (top > -kInf) {
    const double cut = top + std::log(tail_tol);
    for (long l = K; l >= 0; --l)
      if (level[std::size_t(l)] > cut) {
        d = l;
        break;
      }
    for (long l = d + 1; l <= K; ++l)
      for (long k : {l, -l}) {
        const double a = f.log_coef(k).log_abs;
        if (a > -kInf) out.truncation_tail += std::exp(a);
      }
  }
  out.poly = f.truncate(int(d));
  out.net = constant_net(out.poly, n_max, "sigma(" + f.label() + ")");
  return out;
}

namespace {

// Proof-bound residual of one function h: |h_k| |1 - 2 pi c_{k,n}| against
// (1 + 2 pi C) sigma_lambda(h) e^{-M(lambda r n)}.
ResidualBound residual_bound(const std::string& name, const TrigPoly& h, const Mollifier& m,
                             const WeightSequence& ws, UltraClass cls, std::size_t n_max) {
  const WeightView view(ws);
  const CoefDistribution dist = CoefDistribution::from_trig(h, name);
  std::vector<ResidualBound> admissible;
  bool all = true;
  for (double lambda : core_grid()) {
    const TailTest t = coefficient_profile_test(dist, view, lambda, SeminormSign::kPlus,
                                                h.degree());
    if (!t.bounded) {
      all = false;
      continue;
    }
    ResidualBound b{name, lambda, 0.0, -kInf, 0.0, 0.0};
    b.log_k = log_coef_seminorm(h, view, lambda, SeminormSign::kPlus).log_value;
    b.log_allowed = std::log1p(kTwoPi * m.C()) + b.log_k;
    for (std::size_t n = 1; n <= n_max; ++n) {
      double worst = -kInf;
      for (int k = -h.degree(); k <= h.degree(); ++k) {
        const double gap = std::abs(1.0 - m.weight(k, n));
        const double a = std::abs(h.coef(k));
        if (gap == 0.0 || a == 0.0) continue;
        worst = std::max(worst, std::log(a) + std::log(gap));
      }
      if (worst == -kInf) continue;
      b.log_fitted = std::max(b.log_fitted,
                              worst + associated_function(ws, lambda * m.r() * double(n)));
    }
    b.ratio = b.log_fitted == -kInf ? 0.0 : std::exp(b.log_fitted - b.log_allowed);
    admissible.push_back(b);
  }
  if (admissible.empty() || (cls == UltraClass::kBeurling && !all))
    return {name, 0.0, kInf, kInf, kInf, kInf};
  auto cmp = [](const ResidualBound& a, const ResidualBound& b) { return a.ratio < b.ratio; };
  return cls == UltraClass::kBeurling
             ? *std::max_element(admissible.begin(), admissible.end(), cmp)
             : *std::min_element(admissible.begin(), admissible.end(), cmp);
}

}  // namespace

ProductReport check_product_preservation(const CoefDistribution& f, const CoefDistribution& g,
                                         const Mollifier& m, const WeightSequence& ws,
                                         UltraClass cls, std::size_t n_max) {
  const ConstEmbedding F = const_embed(f, ws, cls, n_max);
  const ConstEmbedding G = const_embed(g, ws, cls, n_max);
  const Net iota_f = embed(f, m, n_max);
  const Net iota_g = embed(g, m, n_max);
  // sigma(fg) - iota(f) iota(g) = (sigma f - iota f) sigma g + iota f (sigma g - iota g);
  // this form carries no cancellation between nearly equal products.
  const Net diff = net_add(net_mul(net_sub(F.net, iota_f), G.net),
                           net_mul(iota_f, net_sub(G.net, iota_g)));
  diff.materialize();

  ProductReport rep;
  rep.negligible = classify_negligible(diff, ws, cls);
  const TrigPoly fg = multiply(F.poly, G.poly);
  rep.bounds.push_back(residual_bound("f", F.poly, m, ws, cls, n_max));
  rep.bounds.push_back(residual_bound("g", G.poly, m, ws, cls, n_max));
  rep.bounds.push_back(residual_bound("fg", fg, m, ws, cls, n_max));
  for (const auto& b : rep.bounds) rep.worst_ratio = std::max(rep.worst_ratio, b.ratio);

  rep.band_limited = f.support().has_value() && g.support().has_value();
  if (rep.band_limited) {
    rep.exact_from = std::size_t(*f.support() + *g.support());
    rep.exact_zero = true;
    for (std::size_t n = rep.exact_from; n <= n_max && rep.exact_zero; ++n)
      for (cplx c : diff(n).coefficients())
        if (c != cplx{}) {
          rep.exact_zero = false;
          break;
        }
  }
  return rep;
}

CommuteReport check_operator_commutes(const Ultrapolynomial& P, const CoefDistribution& f,
                                      const Mollifier& m, std::size_t n_max) {
  CommuteReport rep;
  rep.n_max = n_max;
  for (std::size_t n = 0; n <= n_max; ++n) {
    int d = m.degree(n);
    if (f.support()) d = int(std::min<long>(d, *f.support()));
    for (int k = -d; k <= d; ++k) {
      const LogCoef w = LogCoef::from(m.weight(k, n));
      const LogCoef fk = f.log_coef(k);
      const LogCoef pk = log_eval_ultrapoly(P, double(k));
      const LogCoef lhs = pk * (w * fk);
      const LogCoef rhs = w * (pk * fk);
      double res = 0.0;
      if (lhs.is_zero() != rhs.is_zero()) {
        res = 1.0;
      } else if (!lhs.is_zero()) {
        res = std::abs(std::exp(lhs.log_abs - rhs.log_abs) * lhs.unit / rhs.unit - 1.0);
      }
      rep.max_residual = std::max(rep.max_residual, res);
    }
  }
  rep.pass = rep.max_residual <= 1e-12;
  return rep;
}

}  // namespace perigen
