#include "perigen/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "perigen/error.hpp"

namespace perigen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_same_length(const Net& a, const Net& b) {
  if (a.n_max() != b.n_max())
    throw InvalidSpec("nets have different n_max: " + std::to_string(a.n_max()) +
                                " and " + std::to_string(b.n_max()));
}

// Fills out[n] = fn(n) for n = 0..n_max, once for constant nets.
template <class Fn>
std::vector<double> profile(const Net& net, Fn fn) {
  std::vector<double> out(net.n_max() + 1);
  if (net.is_constant()) {
    std::fill(out.begin(), out.end(), fn(net(0)));
    return out;
  }
  net.materialize();
  const auto count = static_cast<std::ptrdiff_t>(out.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    try {
      out[std::size_t(n)] = fn(net(std::size_t(n)));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

std::vector<double> assoc_table(const WeightView& w, double lambda, std::size_t n_max) {
  std::vector<double> m(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) m[n] = associated_detail(w, lambda * double(n)).value;
  return m;
}

Probe probe(double a, double b, std::span<const double> log_norm, std::span<const double> assoc,
            double sign, double tau) {
  std::vector<double> e(log_norm.size());
  for (std::size_t n = 0; n < e.size(); ++n)
    e[n] = log_norm[n] == -kInf ? -kInf : log_norm[n] + sign * assoc[n];
  const TailTest t = bounded_test(e, tau);
  return {a, b, t.margin, t.witness, t.bounded};
}

struct Pattern {
  Quantifier outer;
  Quantifier inner;
  bool outer_is_h;
};

Pattern pattern(UltraClass cls, Mode mode) {
  if (mode == Mode::kModerate)
    return cls == UltraClass::kBeurling
               ? Pattern{Quantifier::kForAll, Quantifier::kExists, true}
               : Pattern{Quantifier::kForAll, Quantifier::kExists, false};
  return cls == UltraClass::kBeurling ? Pattern{Quantifier::kForAll, Quantifier::kForAll, true}
                                      : Pattern{Quantifier::kExists, Quantifier::kExists, false};
}

void check_grids(const Grids& g) {
  auto ok = [](const std::vector<double>& v) {
    return !v.empty() && std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (!ok(g.h) || !ok(g.lambda)) throw InvalidSpec("grids must be nonempty and positive");
}

}  // namespace

// ---------------------------------------------------------------- Net

Net::Net(Generator gen, std::size_t n_max, std::string label, bool constant)
    : gen_(std::move(gen)),
      n_max_(n_max),
      label_(std::move(label)),
      constant_(constant),
      memo_(std::make_shared<Memo>()) {
  memo_->slots.resize(constant ? 1 : n_max + 1);
}

const TrigPoly& Net::operator()(std::size_t n) const {
  if (n > n_max_) throw std::out_of_range("net index " + std::to_string(n) + " > n_max");
  const std::size_t slot = constant_ ? 0 : n;
  {
    std::lock_guard lock(memo_->mu);
    if (memo_->slots[slot]) return *memo_->slots[slot];
  }
  std::unique_ptr<TrigPoly> value;
  try {
    value = std::make_unique<TrigPoly>(gen_(n));
  } catch (const GeneratorFail&) {
    throw;
  } catch (const std::exception& e) {
    throw GeneratorFail("generator '" + label_ + "' failed at n = " + std::to_string(n) + ": " +
                        e.what());
  }
  std::lock_guard lock(memo_->mu);
  if (!memo_->slots[slot]) memo_->slots[slot] = std::move(value);
  return *memo_->slots[slot];
}

void Net::materialize() const {
  const auto count = static_cast<std::ptrdiff_t>(memo_->slots.size());
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t n = 0; n < count; ++n) {
    try {
      (void)(*this)(std::size_t(n));
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

Net make_net(Net::Generator gen, std::size_t n_max, std::string label) {
  if (n_max < kMinNetLength) throw InvalidSpec("a net needs n_max >= 8");
  if (!gen) throw InvalidSpec("empty generator");
  return Net(std::move(gen), n_max, std::move(label));
}

Net constant_net(const TrigPoly& f, std::size_t n_max, std::string label) {
  if (n_max < kMinNetLength) throw InvalidSpec("a net needs n_max >= 8");
  return Net([f](std::size_t) { return f; }, n_max, std::move(label), true);
}

Net dirichlet_net(std::size_t n_max) {
  return make_net([](std::size_t n) { return TrigPoly::dirichlet(int(n)); }, n_max, "dirichlet");
}

Net net_add(const Net& a, const Net& b) {
  require_same_length(a, b);
  return Net(
      [a, b](std::size_t n) {
        TrigPoly r = a(n);
        r += b(n);
        return r;
      },
      a.n_max(), "(" + a.label() + "+" + b.label() + ")", a.is_constant() && b.is_constant());
}

Net net_sub(const Net& a, const Net& b) {
  require_same_length(a, b);
  return Net(
      [a, b](std::size_t n) {
        TrigPoly r = a(n);
        r -= b(n);
        return r;
      },
      a.n_max(), "(" + a.label() + "-" + b.label() + ")", a.is_constant() && b.is_constant());
}

Net net_mul(const Net& a, const Net& b) {
  require_same_length(a, b);
  return Net([a, b](std::size_t n) { return multiply(a(n), b(n)); }, a.n_max(),
             "(" + a.label() + "*" + b.label() + ")", a.is_constant() && b.is_constant());
}

Net net_scale(const Net& a, std::complex<double> s) {
  std::ostringstream os;
  os << s;
  return Net([a, s](std::size_t n) { return a(n) * s; }, a.n_max(), os.str() + "*" + a.label(),
             a.is_constant());
}

Net net_scale(const Net& a, std::function<std::complex<double>(std::size_t)> s,
              std::string label) {
  return Net([a, s](std::size_t n) { return a(n) * s(n); }, a.n_max(),
             label + "*" + a.label());
}

// ---------------------------------------------------------------- grids

std::string to_string(Mode m) { return m == Mode::kModerate ? "moderate" : "negligible"; }

std::vector<double> core_grid() { return {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}; }

std::vector<double> wide_grid() {
  return {0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0};
}

Grids default_grids(UltraClass cls, Mode mode) {
  if (mode == Mode::kNegligible) return {core_grid(), core_grid()};
  if (cls == UltraClass::kBeurling) return {core_grid(), wide_grid()};
  return {wide_grid(), core_grid()};
}

// ---------------------------------------------------------------- profiles

std::vector<double> log_norm_profile(const Net& net, const WeightSequence& ws, double h) {
  const WeightView view(ws);
  return profile(net, [&](const TrigPoly& f) { return log_ud_norm(f, view, h).log_value; });
}

std::vector<double> log_norm_profile_rj(const Net& net, const WeightSequence& ws,
                                        const RSequence& rs) {
  const WeightView view(ws, rs);
  return profile(net, [&](const TrigPoly& f) { return log_ud_norm(f, view, 1.0).log_value; });
}

std::vector<double> log_sup_profile(const Net& net) {
  return profile(net, [](const TrigPoly& f) { return std::log(sup_norm(f)); });
}

// ---------------------------------------------------------------- classifiers

const std::vector<double>& NormCache::profile(double h) {
  auto it = profiles_.find(h);
  if (it == profiles_.end()) {
    std::vector<double> p;
    if (method_ == Method::kCoefficient) {
      const WeightView view(ws_);
      p = perigen::profile(net_, [&](const TrigPoly& c) {
        return log_coef_seminorm(c, view, h, SeminormSign::kPlus).log_value;
      });
    } else {
      p = log_norm_profile(net_, ws_, h);
    }
    it = profiles_.emplace(h, std::move(p)).first;
  }
  return it->second;
}

GrowthVerdict fold_norm_grid(NormCache& cache, const Grids& g, Quantifier outer,
                             Quantifier inner, bool outer_is_h, Mode mode, double tau) {
  check_grids(g);
  const std::size_t n_max = cache.net().n_max();
  const double sign = mode == Mode::kModerate ? -1.0 : 1.0;
  const WeightView view(cache.weights());
  std::vector<std::vector<double>> assoc;
  for (double l : g.lambda) assoc.push_back(assoc_table(view, l, n_max));

  std::vector<Probe> probes;
  if (outer_is_h) {
    for (std::size_t i = 0; i < g.h.size(); ++i)
      for (std::size_t j = 0; j < g.lambda.size(); ++j)
        probes.push_back(probe(g.h[i], g.lambda[j], cache.profile(g.h[i]), assoc[j], sign, tau));
  } else {
    for (std::size_t j = 0; j < g.lambda.size(); ++j)
      for (std::size_t i = 0; i < g.h.size(); ++i)
        probes.push_back(probe(g.lambda[j], g.h[i], cache.profile(g.h[i]), assoc[j], sign, tau));
  }
  auto v = fold_quantifiers(std::move(probes), outer_is_h ? g.h.size() : g.lambda.size(), outer,
                            inner, tau);
  v.outer_name = outer_is_h ? "h" : "lambda";
  v.inner_name = outer_is_h ? "lambda" : "h";
  v.method = cache.method();
  v.test = to_string(mode);
  return v;
}

GrowthVerdict classify_moderate(NormCache& cache, UltraClass cls, const Grids& grids,
                                double tau) {
  const Pattern p = pattern(cls, Mode::kModerate);
  return fold_norm_grid(cache, grids, p.outer, p.inner, p.outer_is_h, Mode::kModerate, tau);
}

GrowthVerdict classify_negligible(NormCache& cache, UltraClass cls, const Grids& grids,
                                  double tau) {
  const Pattern p = pattern(cls, Mode::kNegligible);
  return fold_norm_grid(cache, grids, p.outer, p.inner, p.outer_is_h, Mode::kNegligible, tau);
}

GrowthVerdict classify_moderate(const Net& net, const WeightSequence& ws, UltraClass cls,
                                const Grids& grids, double tau) {
  NormCache cache(net, ws);
  return classify_moderate(cache, cls, grids, tau);
}

GrowthVerdict classify_moderate(const Net& net, const WeightSequence& ws, UltraClass cls) {
  return classify_moderate(net, ws, cls, default_grids(cls, Mode::kModerate));
}

GrowthVerdict classify_negligible(const Net& net, const WeightSequence& ws, UltraClass cls,
                                  const Grids& grids, double tau) {
  NormCache cache(net, ws);
  return classify_negligible(cache, cls, grids, tau);
}

GrowthVerdict classify_negligible(const Net& net, const WeightSequence& ws, UltraClass cls) {
  return classify_negligible(net, ws, cls, default_grids(cls, Mode::kNegligible));
}

GrowthVerdict classify_negligible_supnorm(const Net& net, const WeightSequence& ws,
                                          UltraClass cls, const GrowthVerdict& moderate,
                                          std::span<const double> lambda_grid, double tau) {
  if (moderate.test != to_string(Mode::kModerate) || !moderate.bounded)
    throw HypothesisFail("sup-norm negligibility needs a net already classified moderate");
  if (lambda_grid.empty()) throw InvalidSpec("empty lambda grid");
  const auto sup = log_sup_profile(net);
  const WeightView view(ws);
  std::vector<Probe> probes;
  for (double l : lambda_grid)
    probes.push_back(probe(l, 0.0, sup, assoc_table(view, l, net.n_max()), 1.0, tau));
  const Quantifier outer =
      cls == UltraClass::kBeurling ? Quantifier::kForAll : Quantifier::kExists;
  auto v = fold_quantifiers(std::move(probes), lambda_grid.size(), outer, Quantifier::kForAll,
                            tau);
  v.outer_name = "lambda";
  v.method = Method::kSupNorm;
  v.test = to_string(Mode::kNegligible);
  return v;
}

GrowthVerdict classify_negligible_supnorm(const Net& net, const WeightSequence& ws,
                                          UltraClass cls, const GrowthVerdict& moderate) {
  const auto grid = core_grid();
  return classify_negligible_supnorm(net, ws, cls, moderate, grid);
}

GrowthVerdict coef_classify(const Net& coefficients, const WeightSequence& ws, UltraClass cls,
                            Mode mode, const Grids& grids, double tau) {
  NormCache cache(coefficients, ws, Method::kCoefficient);
  const Pattern p = pattern(cls, mode);
  return fold_norm_grid(cache, grids, p.outer, p.inner, p.outer_is_h, mode, tau);
}

GrowthVerdict coef_classify(const Net& coefficients, const WeightSequence& ws, UltraClass cls,
                            Mode mode) {
  return coef_classify(coefficients, ws, cls, mode, default_grids(cls, mode));
}

GrowthVerdict roumieu_rj_classify(const Net& net, const WeightSequence& ws,
                                  std::span<const RSequence> r_family,
                                  std::span<const RSequence> s_family, Mode mode, double tau) {
  if (r_family.empty() || s_family.empty()) throw InvalidSpec("empty r_j / s_j family");
  const double sign = mode == Mode::kModerate ? -1.0 : 1.0;
  std::vector<std::vector<double>> assoc;
  for (const RSequence& s : s_family) assoc.push_back(assoc_table(WeightView(ws, s), 1.0, net.n_max()));

  std::vector<Probe> probes;
  for (std::size_t i = 0; i < r_family.size(); ++i) {
    const auto norms = log_norm_profile_rj(net, ws, r_family[i]);
    for (std::size_t j = 0; j < s_family.size(); ++j)
      probes.push_back(probe(double(i), double(j), norms, assoc[j], sign, tau));
  }
  auto v = fold_quantifiers(std::move(probes), r_family.size(), Quantifier::kForAll,
                            mode == Mode::kModerate ? Quantifier::kExists : Quantifier::kForAll,
                            tau);
  v.outer_name = "r_j";
  v.inner_name = "s_j";
  v.method = Method::kRjFamily;
  v.test = to_string(mode);
  return v;
}

// ---------------------------------------------------------------- numbers

GeneralizedNumber::GeneralizedNumber(std::vector<std::complex<double>> values)
    : values_(std::move(values)) {
  if (values_.size() < kMinNetLength + 1)
    throw InvalidSpec("a generalized number needs n_max >= 8");
}

GeneralizedNumber GeneralizedNumber::constant(std::complex<double> z, std::size_t n_max) {
  return GeneralizedNumber(std::vector<std::complex<double>>(n_max + 1, z));
}

GrowthVerdict GeneralizedNumber::classify(const WeightSequence& ws, UltraClass cls, Mode mode,
                                          std::span<const double> lambda_grid,
                                          double tau) const {
  if (lambda_grid.empty()) throw InvalidSpec("empty lambda grid");
  std::ostringstream key;
  key.precision(17);
  key << ws.label() << '|' << int(ws.kind()) << '|' << ws.gevrey_exponent() << '|'
      << to_string(cls) << '|' << to_string(mode) << '|' << tau;
  for (double l : lambda_grid) key << '|' << l;
  {
    std::lock_guard lock(cache_->mu);
    if (auto it = cache_->verdicts.find(key.str()); it != cache_->verdicts.end())
      return it->second;
  }

  std::vector<double> logs(values_.size());
  for (std::size_t n = 0; n < logs.size(); ++n) logs[n] = std::log(std::abs(values_[n]));
  const WeightView view(ws);
  const double sign = mode == Mode::kModerate ? -1.0 : 1.0;
  std::vector<Probe> probes;
  for (double l : lambda_grid)
    probes.push_back(probe(l, 0.0, logs, assoc_table(view, l, n_max()), sign, tau));
  const bool some = (cls == UltraClass::kBeurling) == (mode == Mode::kModerate);
  auto v = fold_quantifiers(std::move(probes), lambda_grid.size(),
                            some ? Quantifier::kExists : Quantifier::kForAll,
                            Quantifier::kForAll, tau);
  v.outer_name = "lambda";
  v.method = Method::kSequence;
  v.test = to_string(mode);

  std::lock_guard lock(cache_->mu);
  cache_->verdicts.emplace(key.str(), v);
  return v;
}

GrowthVerdict GeneralizedNumber::classify(const WeightSequence& ws, UltraClass cls,
                                          Mode mode) const {
  const auto grid = core_grid();
  return classify(ws, cls, mode, grid);
}

GeneralizedNumber point_value(const Net& f, const GeneralizedNumber& t) {
  if (t.n_max() != f.n_max()) throw InvalidSpec("point and net have different n_max");
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  std::vector<std::complex<double>> out(f.n_max() + 1);
  for (std::size_t n = 0; n <= f.n_max(); ++n) {
    const auto z = t[n];
    if (z.imag() != 0.0 || z.real() < 0.0 || z.real() > kTwoPi)
      throw InvalidSpec("point entries must be real and lie in [0, 2 pi]");
    out[n] = eval(f(n), z.real());
  }
  return GeneralizedNumber(std::move(out));
}

Witness find_witness(const Net& net, const WeightSequence& ws, double lambda, double tau) {
  if (!(lambda > 0.0)) throw InvalidSpec("lambda must be positive");
  const auto sup = log_sup_profile(net);
  const auto assoc = assoc_table(WeightView(ws), lambda, net.n_max());
  std::vector<double> e(sup.size());
  for (std::size_t n = 0; n < e.size(); ++n) e[n] = sup[n] == -kInf ? -kInf : sup[n] + assoc[n];
  const TailTest t = bounded_test(e, tau);
  if (t.bounded)
    throw NoWitness("net '" + net.label() + "' passes the negligibility test at lambda = " +
                    std::to_string(lambda));

  const std::size_t n0 = head_index(net.n_max());
  const double baseline = *std::max_element(e.begin(), e.begin() + std::ptrdiff_t(n0) + 1);
  Witness w;
  w.lambda = lambda;
  for (std::size_t n = n0 + 1; n < e.size(); ++n) {
    if (!(e[n] > baseline + tau)) continue;
    w.indices.push_back(n);
    w.points.push_back(sup_norm_detail(net(n)).argmax);
    w.log_excess.push_back(e[n] - baseline);
  }
  return w;
}

GeneralizedNumber witness_point(const Witness& w, std::size_t n_max) {
  std::vector<std::complex<double>> t(n_max + 1, 0.0);
  for (std::size_t i = 0; i < w.indices.size(); ++i)
    if (w.indices[i] <= n_max) t[w.indices[i]] = w.points[i];
  return GeneralizedNumber(std::move(t));
}

}  // namespace perigen
