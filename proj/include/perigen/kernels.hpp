#pragma once

// Data-parallel inner loops.  Each OpenMP kernel has a serial reference
// with identical arithmetic, kept for tests and the benchmark.

#include <cstddef>
#include <span>
#include <vector>

#include "perigen/trig_poly.hpp"

namespace perigen::kernels {

/// |f(2 pi j / G)| for j = 0..G-1 via a twiddle table (no per-point trig).
void abs_on_grid(std::span<const cplx> coef, int degree, std::size_t grid,
                 std::span<double> out);
void abs_on_grid_serial(std::span<const cplx> coef, int degree, std::size_t grid,
                        std::span<double> out);

/// Coefficients of the pointwise product, degree da + db.
std::vector<cplx> cauchy_product(std::span<const cplx> a, int da, std::span<const cplx> b,
                                 int db);
std::vector<cplx> cauchy_product_serial(std::span<const cplx> a, int da,
                                        std::span<const cplx> b, int db);

/// Number of OpenMP threads the kernels will use (1 without OpenMP).
int max_threads();

}  // namespace perigen::kernels
