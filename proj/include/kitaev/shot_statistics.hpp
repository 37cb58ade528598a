#pragma once

// Classical post-processing of Ξ(U) shot counts: eighth-interval
// localization, multiscale stitching, and exact outcome distributions.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace kitaev {

/// Shot constant C in s = ⌈C·ln(8l/ε)⌉. Produced by tools/calibrate_shots:
/// the smallest C (0.05 grid) for which the worst-case exact per-level
/// localization failure is at most ε/l for every ε/l in [1e-16, 1e-1].
inline constexpr double kShotConstant = 9.55;

/// Shots per level (for each of the cos and sin estimates).
int shots_per_level(int levels, double eps);

/// Nearest of the 8 interval midpoints m/8 to atan2(sin_est, cos_est)/2π,
/// where cos_est = 1 - 2·ones_cos/s and sin_est = 2·ones_sin/s - 1.
int localize_index(int ones_cos, int ones_sin, int shots);

/// Probability of a 1 on the ancilla of Ξ(U) and Ξ(iU) at phase θ (turns).
double prob_one_cos(double theta);
double prob_one_sin(double theta);

using LevelDistribution = std::array<double, 8>;

/// Exact distribution of localize_index for s shots at phase θ.
LevelDistribution level_distribution(int shots, double theta);

/// Probability that the selected midpoint is farther than 1/8 from θ.
double level_failure(int shots, double theta);

/// max over θ of level_failure, scanning [0, 1/8] (the rest follows by
/// symmetry) on a grid of `grid` + 1 points.
double worst_level_failure(int shots, int grid = 256);

/// Stitches level midpoints idx[j] ≈ 8·(2^j φ mod 1), j = 0..l-1, from the
/// top level down. Returns the numerator over 2^{l+2}, or nullopt when some
/// level has no candidate within 1/8 + 2^{-(l-j)} of its midpoint.
std::optional<std::uint64_t> stitch(const std::vector<int>& idx);

struct StitchDistribution {
  std::map<std::uint64_t, double> numerators;  // over 2^{l+2}
  double failure = 0.0;
};

/// Pushes independent per-level distributions through `stitch`.
StitchDistribution stitch_distribution(const std::vector<LevelDistribution>& levels);

/// Circular distance between x and y in turns.
double circular_distance(double x, double y);

}  // namespace kitaev
