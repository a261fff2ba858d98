#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace deterrence::roots {

struct Bracket {
  double lo;
  double hi;
};

// Root of f in [lo, hi] given f(lo), f(hi) of opposite sign (TOMS 748).
// Throws NonConvergence when max_iter is exhausted.
double solve_bracketed(const std::function<double(double)>& f, double lo, double hi,
                       int max_iter);

// Sign changes of f over grid (ascending). Non-finite samples split the scan.
std::vector<Bracket> scan_sign_changes(const std::function<double(double)>& f,
                                       const std::vector<double>& grid);

// Every root found by scanning grid and refining each bracket.
std::vector<double> all_roots(const std::function<double(double)>& f,
                              const std::vector<double>& grid, int max_iter);

std::vector<double> linspace(double lo, double hi, int points);

}  // namespace deterrence::roots
