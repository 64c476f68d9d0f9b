#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace perigen {

using cplx = std::complex<double>;

/// Finitely supported Fourier coefficient table f(t) = sum_{|k|<=N} c_k e^{ikt}.
class TrigPoly {
 public:
  TrigPoly() : c_(1, cplx{0.0, 0.0}) {}
  /// coefficients[i] is c_{i - degree}; size must be 2 * degree + 1.
  TrigPoly(int degree, std::vector<cplx> coefficients);
  explicit TrigPoly(int degree) : degree_(degree), c_(2 * std::size_t(degree) + 1) {}

  static TrigPoly zero() { return {}; }
  static TrigPoly constant(cplx value);
  static TrigPoly monomial(int k, cplx value = 1.0);
  static TrigPoly sin();
  static TrigPoly cos();
  /// D_n(t) = (1/2pi) sum_{|k|<=n} e^{ikt}.
  static TrigPoly dirichlet(int n);

  int degree() const { return degree_; }
  cplx coef(int k) const {
    return (k < -degree_ || k > degree_) ? cplx{} : c_[std::size_t(k + degree_)];
  }
  cplx& at(int k) { return c_[std::size_t(k + degree_)]; }
  std::span<const cplx> coefficients() const { return c_; }
  bool is_zero() const;

  /// Same polynomial with degree reduced to the outermost nonzero coefficient.
  TrigPoly trimmed() const;
  TrigPoly with_degree(int degree) const;
  /// Drops coefficients with |c_k| <= rel * max |c|.
  TrigPoly chopped(double rel) const;

  TrigPoly& operator+=(const TrigPoly& o);
  TrigPoly& operator-=(const TrigPoly& o);
  TrigPoly& operator*=(cplx s);

  friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
  friend TrigPoly operator-(TrigPoly a, const TrigPoly& b) { return a -= b; }
  friend TrigPoly operator*(TrigPoly a, cplx s) { return a *= s; }
  friend TrigPoly operator*(cplx s, TrigPoly a) { return a *= s; }

  /// Largest coefficient difference after aligning degrees.
  friend double max_coef_diff(const TrigPoly& a, const TrigPoly& b);

 private:
  int degree_ = 0;
  std::vector<cplx> c_;
};

/// sum_k c_k e^{ikt} with compensated summation.
cplx eval(const TrigPoly& f, double t);

/// D^p f with D = -i d/dt: c_k -> k^p c_k.  Throws Overflow when a
/// coefficient leaves the double range.
TrigPoly derivative(const TrigPoly& f, int p);

/// Multiplication by e^{ikt}.
TrigPoly shift(const TrigPoly& f, int k);

}  // namespace perigen
