#include "perigen/trig_poly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perigen/error.hpp"

namespace perigen {

TrigPoly::TrigPoly(int degree, std::vector<cplx> coefficients)
    : degree_(degree), c_(std::move(coefficients)) {
  if (degree < 0 || c_.size() != 2 * std::size_t(degree) + 1)
    throw InvalidSpec("TrigPoly: coefficient count must be 2 * degree + 1");
}

TrigPoly TrigPoly::constant(cplx value) { return TrigPoly(0, {value}); }

TrigPoly TrigPoly::monomial(int k, cplx value) {
  TrigPoly f(std::abs(k));
  f.at(k) = value;
  return f;
}

TrigPoly TrigPoly::sin() {
  TrigPoly f(1);
  f.at(1) = cplx(0.0, -0.5);
  f.at(-1) = cplx(0.0, 0.5);
  return f;
}

TrigPoly TrigPoly::cos() {
  TrigPoly f(1);
  f.at(1) = 0.5;
  f.at(-1) = 0.5;
  return f;
}

TrigPoly TrigPoly::dirichlet(int n) {
  return TrigPoly(n, std::vector<cplx>(2 * std::size_t(n) + 1, 0.5 / std::numbers::pi));
}

bool TrigPoly::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](cplx z) { return z == cplx{}; });
}

TrigPoly TrigPoly::trimmed() const {
  int d = degree_;
  while (d > 0 && coef(d) == cplx{} && coef(-d) == cplx{}) --d;
  return with_degree(d);
}

TrigPoly TrigPoly::with_degree(int degree) const {
  TrigPoly out(degree);
  const int m = std::min(degree, degree_);
  for (int k = -m; k <= m; ++k) out.at(k) = coef(k);
  return out;
}

TrigPoly TrigPoly::chopped(double rel) const {
  double mx = 0.0;
  for (cplx z : c_) mx = std::max(mx, std::abs(z));
  TrigPoly out = *this;
  for (auto& z : out.c_)
    if (std::abs(z) <= rel * mx) z = 0.0;
  return out.trimmed();
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
  if (o.degree_ > degree_) *this = with_degree(o.degree_);
  for (int k = -o.degree_; k <= o.degree_; ++k) at(k) += o.coef(k);
  return *this;
}

TrigPoly& TrigPoly::operator-=(const TrigPoly& o) {
  if (o.degree_ > degree_) *this = with_degree(o.degree_);
  for (int k = -o.degree_; k <= o.degree_; ++k) at(k) -= o.coef(k);
  return *this;
}

TrigPoly& TrigPoly::operator*=(cplx s) {
  for (auto& z : c_) z *= s;
  return *this;
}

double max_coef_diff(const TrigPoly& a, const TrigPoly& b) {
  const int d = std::max(a.degree(), b.degree());
  double m = 0.0;
  for (int k = -d; k <= d; ++k) m = std::max(m, std::abs(a.coef(k) - b.coef(k)));
  return m;
}

cplx eval(const TrigPoly& f, double t) {
  t = std::remainder(t, 2.0 * std::numbers::pi);
  // Neumaier summation on both components.
  double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
  auto add = [](double& s, double& c, double x) {
    const double u = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - u) + x : (x - u) + s;
    s = u;
  };
  for (int k = -f.degree(); k <= f.degree(); ++k) {
    const cplx c = f.coef(k);
    if (c == cplx{}) continue;
    const cplx term = c * std::polar(1.0, double(k) * t);
    add(sr, cr, term.real());
    add(si, ci, term.imag());
  }
  return {sr + cr, si + ci};
}

TrigPoly derivative(const TrigPoly& f, int p) {
  if (p < 0) throw InvalidSpec("derivative order must be non-negative");
  TrigPoly out = f;
  if (p == 0) return out;
  for (int k = -f.degree(); k <= f.degree(); ++k) {
    const cplx c = f.coef(k);
    if (c == cplx{}) continue;
    const double mag = double(p) * std::log(std::abs(double(k))) + std::log(std::abs(c));
    if (k != 0 && mag > 709.0) throw Overflow("derivative coefficient exceeds double range");
    out.at(k) = c * std::pow(double(k), p);
  }
  return out;
}

TrigPoly shift(const TrigPoly& f, int k) {
  TrigPoly out(f.degree() + std::abs(k));
  for (int j = -f.degree(); j <= f.degree(); ++j) out.at(j + k) = f.coef(j);
  return out.trimmed();
}

}  // namespace perigen
