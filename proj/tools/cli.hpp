#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "perigen/algebra.hpp"

namespace perigen::cli {

/// u = iota(sin) iota(delta), v = u iota(cot_reg), w = iota(cos) iota(delta)
/// with the Dirichlet mollifier, p! weights and the Roumieu class.
struct SchwartzDemo {
  std::size_t n_max = 0;
  std::vector<double> sup_u;  // sup norm of u_n, n = 0..n_max
  double band_lo = 0.30;
  double band_hi = 0.32;
  std::size_t band_from = 16;
  bool sup_in_band = false;
  GrowthVerdict u_negligible;
  GrowthVerdict v_minus_w_negligible;
  GrowthVerdict w_minus_delta_negligible;
  double w_minus_delta_edge = 0.0;  // largest |coefficient| of w_n - iota(delta)_n at n = n_max
};

SchwartzDemo schwartz_demo(std::size_t n_max = 64);

/// Runs one invocation; args excludes the program name.  Returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace perigen::cli
