#include "deterrence/roots.hpp"

#include <cmath>
#include <cstdint>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "deterrence/errors.hpp"

namespace deterrence::roots {

double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                       int max_iter) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) throw NonConvergence("root is not bracketed");
  std::uintmax_t iters = static_cast<std::uintmax_t>(max_iter);
  auto tol = [](double a, double b) {
    return std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                  std::max({1.0, std::abs(a), std::abs(b)});
  };
  auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  if (iters >= static_cast<std::uintmax_t>(max_iter)) {
    throw NonConvergence("bracketing solver hit max_iter");
  }
  // Prefer the endpoint with the smaller residual.
  return std::abs(f(a)) <= std::abs(f(b)) ? a : b;
}

std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f,
                                       const std::vector<double>& grid) {
  std::vector<Bracket> out;
  double prev_x = 0.0;
  double prev_f = std::nan("");
  for (double x : grid) {
    double fx = f(x);
    if (std::isfinite(fx) && std::isfinite(prev_f)) {
      if (fx == 0.0) {
        out.push_back({x, x});
      } else if (prev_f != 0.0 && (prev_f > 0.0) != (fx > 0.0)) {
        out.push_back({prev_x, x});
      }
    }
    prev_x = x;
    prev_f = fx;
  }
  return out;
}

std::vector<double> all_roots(const std::function<double(double)>& f,
                              const std::vector<double>& grid, int max_iter) {
  std::vector<double> out;
  for (const auto& br : scan_sign_changes(f, grid)) {
    out.push_back(br.lo == br.hi ? br.lo : solve_bracketed(f, br.lo, br.hi, max_iter));
  }
  return out;
}

std::vector<double> linspace(double lo, double hi, int points) {
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = lo;
    return out;
  }
  for (int j = 0; j < points; ++j) out[j] = lo + (hi - lo) * j / (points - 1);
  out.back() = hi;
  return out;
}

}  // namespace deterrence::roots
