#include "perigen/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace perigen::kernels {

namespace {

std::vector<cplx> twiddles(std::size_t grid) {
  std::vector<cplx> w(grid);
  for (std::size_t m = 0; m < grid; ++m)
    w[m] = std::polar(1.0, 2.0 * std::numbers::pi * double(m) / double(grid));
  return w;
}

inline double abs_at(std::span<const cplx> coef, int degree, const std::vector<cplx>& w,
                     std::int64_t j) {
  const auto G = static_cast<std::int64_t>(w.size());
  cplx acc{};
  for (int k = -degree; k <= degree; ++k) {
    const cplx c = coef[std::size_t(k + degree)];
    if (c == cplx{}) continue;
    std::int64_t m = (j * k) % G;
    if (m < 0) m += G;
    acc += c * w[std::size_t(m)];
  }
  return std::abs(acc);
}

inline cplx product_coef(std::span<const cplx> a, int da, std::span<const cplx> b, int db,
                         int k) {
  cplx acc{};
  const int lo = std::max(-da, k - db);
  const int hi = std::min(da, k + db);
  for (int j = lo; j <= hi; ++j) acc += a[std::size_t(j + da)] * b[std::size_t(k - j + db)];
  return acc;
}

}  // namespace

void abs_on_grid(std::span<const cplx> coef, int degree, std::size_t grid,
                 std::span<double> out) {
  const auto w = twiddles(grid);
  const auto G = static_cast<std::int64_t>(grid);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 0; j < G; ++j) out[std::size_t(j)] = abs_at(coef, degree, w, j);
}

void abs_on_grid_serial(std::span<const cplx> coef, int degree, std::size_t grid,
                        std::span<double> out) {
  const auto w = twiddles(grid);
  for (std::size_t j = 0; j < grid; ++j) out[j] = abs_at(coef, degree, w, std::int64_t(j));
}

std::vector<cplx> cauchy_product(std::span<const cplx> a, int da, std::span<const cplx> b,
                                 int db) {
  const int d = da + db;
  std::vector<cplx> out(2 * std::size_t(d) + 1);
#pragma omp parallel for schedule(static)
  for (int k = -d; k <= d; ++k) out[std::size_t(k + d)] = product_coef(a, da, b, db, k);
  return out;
}

std::vector<cplx> cauchy_product_serial(std::span<const cplx> a, int da,
                                        std::span<const cplx> b, int db) {
  const int d = da + db;
  std::vector<cplx> out(2 * std::size_t(d) + 1);
  for (int k = -d; k <= d; ++k) out[std::size_t(k + d)] = product_coef(a, da, b, db, k);
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace perigen::kernels
