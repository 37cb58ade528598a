// Calibrates the shot constant C in s = ⌈C·ln(8l/ε)⌉.
//
// For each per-level target t = ε/l on a log grid, finds the smallest s whose
// worst-case exact localization failure (binomial enumeration over both
// shot counts, θ scanned over a fundamental domain) is at most t. C is the
// smallest value, on a 0.05 grid, for which ⌈C·ln(8/t)⌉ meets every target.

#include <cmath>
#include <cstdio>
#include <vector>

#include "kitaev/shot_statistics.hpp"

namespace {

int minimal_shots(double target, int grid) {
  int lo = 1, hi = 8;
  while (kitaev::worst_level_failure(hi, grid) > target) hi *= 2;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (kitaev::worst_level_failure(mid, grid) <= target) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace

int main() {
  const int grid = 128;
  std::vector<double> targets;
  for (double x = 1.0; x <= 16.0 + 1e-9; x += 0.5) targets.push_back(std::pow(10.0, -x));
  double c_needed = 0.0;
  for (double t : targets) {
    const int s = minimal_shots(t, grid);
    const double c = s / std::log(8.0 / t);
    std::printf("t=%.3e  s_min=%4d  C_t=%.4f\n", t, s, c);
    c_needed = std::max(c_needed, c);
  }
  double c = std::ceil(c_needed * 20.0) / 20.0;
  for (;; c += 0.05) {
    bool ok = true;
    for (double t : targets) {
      const int s = static_cast<int>(std::ceil(c * std::log(8.0 / t)));
      if (kitaev::worst_level_failure(s, grid) > t) {
        ok = false;
        break;
      }
    }
    if (ok) break;
  }
  std::printf("C = %.2f\n", c);
  return 0;
}
