#include "perigen/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perigen/error.hpp"
#include "perigen/kernels.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double wrap_angle(double t) {
  t = std::fmod(t, kTwoPi);
  return t < 0.0 ? t + kTwoPi : t;
}

// Maximises |f| on [a, b] by golden-section search.
std::pair<double, double> golden_max(const TrigPoly& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - g * (b - a);
  double x2 = a + g * (b - a);
  double f1 = std::abs(eval(f, x1));
  double f2 = std::abs(eval(f, x2));
  for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = std::abs(eval(f, x2));
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = std::abs(eval(f, x1));
    }
  }
  return f1 >= f2 ? std::pair{f1, x1} : std::pair{f2, x2};
}

}  // namespace

std::string to_string(UltraClass c) {
  return c == UltraClass::kBeurling ? "beurling" : "roumieu";
}

LogCoef LogCoef::from(cplx z) {
  if (z == cplx{}) return zero();
  const double a = std::abs(z);
  return {std::log(a), z / a};
}

cplx LogCoef::value() const {
  if (is_zero()) return {};
  return unit * std::exp(log_abs);
}

CoefDistribution::CoefDistribution(Tag tag, Oracle oracle, UltraClass cls, double growth_lambda,
                                   std::string label, std::optional<long> support)
    : tag_(tag),
      oracle_(std::move(oracle)),
      cls_(cls),
      growth_lambda_(growth_lambda),
      label_(std::move(label)),
      support_(support) {}

CoefDistribution CoefDistribution::delta() {
  return {Tag::kDelta, [](long) { return LogCoef{-std::log(kTwoPi), {1.0, 0.0}}; },
          UltraClass::kRoumieu, 0.0, "delta"};
}

CoefDistribution CoefDistribution::cot_reg() {
  return {Tag::kCotReg,
          [](long k) {
            if (k == 0) return LogCoef{0.0, {0.0, 1.0}};
            if (k < 0 && k % 2 == 0) return LogCoef{std::log(2.0), {0.0, 1.0}};
            return LogCoef::zero();
          },
          UltraClass::kRoumieu, 0.0, "cot_reg"};
}

CoefDistribution CoefDistribution::exp_decay(double mu) {
  if (!(mu > 0.0)) throw InvalidSpec("exp_decay rate must be positive");
  return {Tag::kExpDecay,
          [mu](long k) { return LogCoef{-mu * std::abs(double(k)), {1.0, 0.0}}; },
          UltraClass::kRoumieu, 0.0, "exp_decay:" + std::to_string(mu)};
}

CoefDistribution CoefDistribution::exp_growth(double lambda, const WeightSequence& ws) {
  if (!(lambda > 0.0)) throw InvalidSpec("exp_growth rate must be positive");
  auto w = std::make_shared<const WeightSequence>(ws);
  return {Tag::kExpGrowth,
          [w, lambda](long k) {
            return LogCoef{associated_function(*w, lambda * double(k)), {1.0, 0.0}};
          },
          UltraClass::kBeurling, lambda, "exp_growth:" + std::to_string(lambda)};
}

CoefDistribution CoefDistribution::from_trig(const TrigPoly& f, std::string label) {
  auto p = std::make_shared<const TrigPoly>(f.trimmed());
  const long d = p->degree();
  CoefDistribution out(Tag::kTable,
                       [p](long k) {
                         if (std::abs(k) > p->degree()) return LogCoef::zero();
                         return LogCoef::from(p->coef(int(k)));
                       },
                       UltraClass::kRoumieu, 0.0, std::move(label), d);
  out.exact_ = p;
  return out;
}

cplx CoefDistribution::coef(long k) const {
  if (exact_) return std::abs(k) > exact_->degree() ? cplx{} : exact_->coef(int(k));
  return oracle_(k).value();
}

CoefDistribution CoefDistribution::zero() {
  return {Tag::kTable, [](long) { return LogCoef::zero(); }, UltraClass::kRoumieu, 0.0, "zero",
          0L};
}

TrigPoly CoefDistribution::truncate(int degree) const {
  if (support_) degree = int(std::min<long>(degree, *support_));
  TrigPoly out(degree);
  for (int k = -degree; k <= degree; ++k) out.at(k) = coef(k);
  return out;
}

CoefDistribution CoefDistribution::scaled(cplx s) const {
  if (s == cplx{}) return zero();
  const LogCoef ls = LogCoef::from(s);
  auto base = oracle_;
  return {Tag::kDerived, [base, ls](long k) { return base(k) * ls; }, cls_, growth_lambda_,
          label_, support_};
}

CoefDistribution operator+(const CoefDistribution& a, const CoefDistribution& b) {
  auto fa = a.oracle_;
  auto fb = b.oracle_;
  std::optional<long> support;
  if (a.support_ && b.support_) support = std::max(*a.support_, *b.support_);
  return {CoefDistribution::Tag::kDerived,
          [fa, fb](long k) {
            const LogCoef x = fa(k);
            const LogCoef y = fb(k);
            if (x.is_zero()) return y;
            if (y.is_zero()) return x;
            const double m = std::max(x.log_abs, y.log_abs);
            const cplx v = x.unit * std::exp(x.log_abs - m) + y.unit * std::exp(y.log_abs - m);
            LogCoef out = LogCoef::from(v);
            if (!out.is_zero()) out.log_abs += m;
            return out;
          },
          a.cls_, std::max(a.growth_lambda_, b.growth_lambda_), a.label_ + "+" + b.label_,
          support};
}

CoefDistribution CoefDistribution::shifted(long k) const {
  auto base = oracle_;
  std::optional<long> support;
  if (support_) support = *support_ + std::abs(k);
  return {Tag::kDerived, [base, k](long j) { return base(j - k); }, cls_, growth_lambda_,
          label_ + "*e^{i" + std::to_string(k) + "t}", support};
}

CoefDistribution CoefDistribution::with_class(UltraClass cls, double growth_lambda) const {
  CoefDistribution out = *this;
  out.cls_ = cls;
  out.growth_lambda_ = growth_lambda;
  return out;
}

SupNorm sup_norm_detail(const TrigPoly& f_in) {
  const TrigPoly f = f_in.trimmed();
  if (f.is_zero()) return {};
  if (f.degree() == 0) return {std::abs(f.coef(0)), 0.0};

  const std::size_t G = std::max<std::size_t>(4096, 16 * std::size_t(f.degree()) + 1);
  std::vector<double> vals(G);
  kernels::abs_on_grid(f.coefficients(), f.degree(), G, vals);
  const double gmax = *std::max_element(vals.begin(), vals.end());

  std::vector<std::size_t> cands;
  for (std::size_t j = 0; j < G && cands.size() < 8; ++j) {
    const double l = vals[(j + G - 1) % G];
    const double r = vals[(j + 1) % G];
    if (vals[j] >= l && vals[j] >= r && vals[j] >= 0.95 * gmax) cands.push_back(j);
  }

  const double step = kTwoPi / double(G);
  SupNorm best{-1.0, 0.0};
  for (std::size_t j : cands) {
    const double t = step * double(j);
    auto [v, x] = golden_max(f, t - step, t + step);
    if (vals[j] >= v * (1.0 - 1e-14)) {
      v = vals[j];
      x = t;
    }
    if (v > best.value * (1.0 + 1e-12)) best = {v, wrap_angle(x)};
  }
  if (best.value < gmax) {
    const auto j = std::size_t(std::max_element(vals.begin(), vals.end()) - vals.begin());
    best = {gmax, step * double(j)};
  }
  return best;
}

double sup_norm(const TrigPoly& f) { return sup_norm_detail(f).value; }

UdNorm log_ud_norm(const TrigPoly& f_in, const WeightView& w, double h) {
  if (!(h > 0.0)) throw InvalidSpec("ud_norm needs h > 0");
  const TrigPoly f = f_in.trimmed();
  UdNorm out;
  if (f.is_zero()) return out;

  struct Term {
    int k;
    double log_abs;
    double log_hk;
  };
  std::vector<Term> terms;
  for (int k = -f.degree(); k <= f.degree(); ++k) {
    const cplx c = f.coef(k);
    if (c == cplx{}) continue;
    terms.push_back({k, std::log(std::abs(c)), k == 0 ? -kInf : std::log(h * std::abs(k))});
  }
  const double log_hn = std::log(h * double(f.degree()));

  // Cheap bounds: max_k |k^p c_k| <= ||D^p f|| <= sum_k |k^p c_k|.
  std::vector<double> upper;
  std::vector<double> lower;
  double best_lower = -kInf;
  std::size_t p = 0;
  for (;; ++p) {
    double lu = -kInf;
    double ll = -kInf;
    for (const Term& t : terms) {
      const double x = p == 0 ? t.log_abs : t.log_abs + double(p) * t.log_hk;
      lu = log_add(lu, x);
      ll = std::max(ll, x);
    }
    const double lw = w.log_weight(p);
    upper.push_back(lu - lw);
    lower.push_back(ll - lw);
    best_lower = std::max(best_lower, ll - lw);
    // Past the peak of (hN)^p / W_p the upper bound only decreases.
    if (p >= 1 && w.log_ratio(p + 1) >= log_hn && upper.back() < best_lower) break;
    if (p >= w.p_max()) {
      out.truncated = true;
      break;
    }
  }

  // D^p f rescaled so that its largest coefficient has modulus one.
  auto normalised = [&](std::size_t q) {
    if (q == 0) return std::pair{0.0, f};
    double shift = -kInf;
    for (const Term& t : terms)
      if (t.k != 0) shift = std::max(shift, t.log_abs + double(q) * t.log_hk);
    TrigPoly g(f.degree());
    for (const Term& t : terms) {
      if (t.k == 0) continue;
      const double sign = (t.k < 0 && q % 2 == 1) ? -1.0 : 1.0;
      const cplx unit = f.coef(t.k) / std::abs(f.coef(t.k));
      g.at(t.k) = sign * unit * std::exp(t.log_abs + double(q) * t.log_hk - shift);
    }
    return std::pair{shift, g};
  };

  std::vector<std::size_t> order;
  for (std::size_t q = 0; q < upper.size(); ++q)
    if (upper[q] >= best_lower) order.push_back(q);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return upper[a] > upper[b]; });

  // Coarse pass: a grid of G points gives max_grid <= ||g|| and, by
  // Bernstein, ||g|| (1 - (pi N / G)^2 / 2) <= max_grid.
  const std::size_t coarse = std::max<std::size_t>(64, 8 * std::size_t(f.degree()));
  const double slack =
      -std::log(1.0 - 0.5 * std::pow(std::numbers::pi * f.degree() / double(coarse), 2));
  std::vector<double> grid(coarse);
  std::vector<std::pair<double, std::size_t>> refined;
  double best = -kInf;
  for (std::size_t q : order) {
    if (upper[q] <= best) break;
    const auto [shift, g] = normalised(q);
    kernels::abs_on_grid(g.coefficients(), g.degree(), coarse, grid);
    const double lo = std::max(
        shift - w.log_weight(q) + std::log(*std::max_element(grid.begin(), grid.end())), lower[q]);
    best = std::max(best, lo);
    refined.push_back({std::min(lo + slack, upper[q]), q});
  }
  std::sort(refined.begin(), refined.end(), std::greater<>());

  best = -kInf;
  for (const auto& [ub, q] : refined) {
    if (ub <= best) break;
    const auto [shift, g] = normalised(q);
    const double exact = std::max(shift - w.log_weight(q) + std::log(sup_norm(g)), lower[q]);
    ++out.exact_evaluations;
    if (exact > best) {
      best = exact;
      out.argmax_p = q;
    }
  }
  out.log_value = best;
  return out;
}

double ud_norm(const TrigPoly& f, const WeightSequence& ws, double h) {
  return std::exp(log_ud_norm(f, WeightView(ws), h).log_value);
}

double ud_norm_rj(const TrigPoly& f, const WeightSequence& ws, const RSequence& rs) {
  return std::exp(log_ud_norm(f, WeightView(ws, rs), 1.0).log_value);
}

FourierResult fourier_coefficients(const std::function<cplx(double)>& samples, int N) {
  if (N < 0) throw InvalidSpec("fourier_coefficients needs N >= 0");
  const long M = 2L * N + 2;
  std::vector<cplx> vals(static_cast<std::size_t>(M));
  for (long j = 0; j < M; ++j) vals[std::size_t(j)] = samples(kTwoPi * double(j) / double(M));

  FourierResult out{TrigPoly(N), false};
  double mx = 0.0;
  for (int k = -N; k <= N; ++k) {
    cplx acc{};
    for (long j = 0; j < M; ++j) {
      long m = (j * k) % M;
      if (m < 0) m += M;
      acc += vals[std::size_t(j)] * std::polar(1.0, -kTwoPi * double(m) / double(M));
    }
    out.poly.at(k) = acc / double(M);
    mx = std::max(mx, std::abs(out.poly.at(k)));
  }
  if (N > 0 && mx > 0.0)
    out.alias_warning = std::abs(out.poly.coef(N)) > 0.5 * mx || std::abs(out.poly.coef(-N)) > 0.5 * mx;
  return out;
}

TrigPoly convolve(const TrigPoly& f, const TrigPoly& g) {
  const int d = std::min(f.degree(), g.degree());
  TrigPoly out(d);
  for (int k = -d; k <= d; ++k) out.at(k) = kTwoPi * f.coef(k) * g.coef(k);
  return out;
}

TrigPoly convolve(const CoefDistribution& f, const TrigPoly& g) {
  TrigPoly out(g.degree());
  for (int k = -g.degree(); k <= g.degree(); ++k) {
    const LogCoef gk = LogCoef::from(g.coef(k));
    out.at(k) = (f.log_coef(k) * gk * LogCoef{std::log(kTwoPi), {1.0, 0.0}}).value();
  }
  return out;
}

CoefDistribution convolve(const CoefDistribution& f, const CoefDistribution& g) {
  std::optional<long> support;
  if (f.support() && g.support()) support = std::min(*f.support(), *g.support());
  else if (f.support()) support = f.support();
  else if (g.support()) support = g.support();
  return {CoefDistribution::Tag::kDerived,
          [f, g](long k) {
            return f.log_coef(k) * g.log_coef(k) * LogCoef{std::log(kTwoPi), {1.0, 0.0}};
          },
          f.cls(), std::max(f.growth_lambda(), g.growth_lambda()),
          f.label() + "*" + g.label(), support};
}

TrigPoly multiply(const TrigPoly& f, const TrigPoly& g) {
  return {f.degree() + g.degree(),
          kernels::cauchy_product(f.coefficients(), f.degree(), g.coefficients(), g.degree())};
}

TrigPoly multiply_serial(const TrigPoly& f, const TrigPoly& g) {
  return {f.degree() + g.degree(), kernels::cauchy_product_serial(f.coefficients(), f.degree(),
                                                                  g.coefficients(), g.degree())};
}

namespace {

double signed_assoc(const WeightView& w, double lambda, long k, SeminormSign sign) {
  const double m = associated_detail(w, lambda * double(k)).value;
  return sign == SeminormSign::kPlus ? m : -m;
}

}  // namespace

Seminorm log_coef_seminorm(const TrigPoly& c, const WeightView& w, double lambda,
                           SeminormSign sign) {
  Seminorm out;
  for (int k = -c.degree(); k <= c.degree(); ++k) {
    const cplx z = c.coef(k);
    if (z == cplx{}) continue;
    const double v = std::log(std::abs(z)) + signed_assoc(w, lambda, k, sign);
    if (v > out.log_value) {
      out.log_value = v;
      out.argmax_k = k;
    }
  }
  return out;
}

Seminorm log_coef_seminorm(const CoefDistribution& c, const WeightView& w, double lambda,
                           SeminormSign sign, long k_max) {
  const long K = c.support() ? std::min(*c.support(), k_max) : k_max;
  Seminorm out;
  double half = -kInf;
  for (long l = 0; l <= K; ++l) {
    for (long k : {l, -l}) {
      const LogCoef z = c.log_coef(k);
      if (z.is_zero()) continue;
      const double v = z.log_abs + signed_assoc(w, lambda, k, sign);
      if (v > out.log_value) {
        out.log_value = v;
        out.argmax_k = k;
      }
      if (l == 0) break;
    }
    if (l == K / 2) half = out.log_value;
  }
  if (!c.support()) {
    out.truncated = out.log_value > half + 1e-9 * (1.0 + std::abs(half));
  }
  return out;
}

double coef_seminorm(const TrigPoly& c, const WeightSequence& ws, double lambda,
                     SeminormSign sign) {
  return std::exp(log_coef_seminorm(c, WeightView(ws), lambda, sign).log_value);
}

double coef_seminorm(const CoefDistribution& c, const WeightSequence& ws, double lambda,
                     SeminormSign sign, long k_max) {
  return std::exp(log_coef_seminorm(c, WeightView(ws), lambda, sign, k_max).log_value);
}

TailTest coefficient_profile_test(const CoefDistribution& c, const WeightView& w, double lambda,
                                  SeminormSign sign, long k_max, double tau) {
  const long K = c.support() ? std::min(*c.support(), k_max) : k_max;
  std::vector<double> prof(std::size_t(K) + 1, -kInf);
  for (long l = 0; l <= K; ++l) {
    const double a = c.log_coef(l).log_abs;
    const double b = c.log_coef(-l).log_abs;
    const double m = std::max(a, b);
    if (m == -kInf) continue;
    prof[std::size_t(l)] = m + signed_assoc(w, lambda, l, sign);
  }
  return bounded_tail(prof, head_index(std::size_t(K)), tau);
}

}  // namespace perigen
