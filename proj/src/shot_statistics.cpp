#include "kitaev/shot_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kitaev/errors.hpp"

namespace kitaev {

int shots_per_level(int levels, double eps) {
  if (levels < 1) throw InvalidArgument("shots_per_level: need at least one level");
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("shots_per_level: eps must be in (0,1)");
  return std::max(1, static_cast<int>(std::ceil(kShotConstant * std::log(8.0 * levels / eps))));
}

int localize_index(int ones_cos, int ones_sin, int shots) {
  const double c = static_cast<double>(shots - 2 * ones_cos);
  const double s = static_cast<double>(2 * ones_sin - shots);
  double turns = std::atan2(s, c) / (2.0 * std::numbers::pi);
  if (turns < 0) turns += 1.0;
  return static_cast<int>(std::floor(8.0 * turns + 0.5)) % 8;
}

double prob_one_cos(double theta) { return 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * theta)); }
double prob_one_sin(double theta) { return 0.5 * (1.0 + std::sin(2.0 * std::numbers::pi * theta)); }

double circular_distance(double x, double y) {
  double d = std::fmod(std::abs(x - y), 1.0);
  return std::min(d, 1.0 - d);
}

namespace {

std::vector<double> binomial_pmf(int n, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
  if (p <= 0.0) {
    pmf[0] = 1.0;
    return pmf;
  }
  if (p >= 1.0) {
    pmf.back() = 1.0;
    return pmf;
  }
  const double lp = std::log(p), lq = std::log1p(-p);
  const double lg = std::lgamma(n + 1.0);
  for (int k = 0; k <= n; ++k) {
    pmf[static_cast<std::size_t>(k)] =
        std::exp(lg - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp + (n - k) * lq);
  }
  return pmf;
}

// Outcomes below this weight are dropped; their total is far below every
// failure probability we resolve.
constexpr double kPmfFloor = 1e-30;

}  // namespace

LevelDistribution level_distribution(int shots, double theta) {
  if (shots < 1) throw InvalidArgument("level_distribution: need at least one shot");
  const auto pc = binomial_pmf(shots, prob_one_cos(theta));
  const auto ps = binomial_pmf(shots, prob_one_sin(theta));
  std::vector<int> ks;
  for (int k = 0; k <= shots; ++k) {
    if (ps[static_cast<std::size_t>(k)] > kPmfFloor) ks.push_back(k);
  }
  LevelDistribution d{};
  for (int kc = 0; kc <= shots; ++kc) {
    const double a = pc[static_cast<std::size_t>(kc)];
    if (a <= kPmfFloor) continue;
    for (int k : ks) d[static_cast<std::size_t>(localize_index(kc, k, shots))] += a * ps[static_cast<std::size_t>(k)];
  }
  return d;
}

double level_failure(int shots, double theta) {
  const auto d = level_distribution(shots, theta);
  double fail = 0.0;
  for (int m = 0; m < 8; ++m) {
    if (circular_distance(m / 8.0, theta) > 0.125 + 1e-12) fail += d[static_cast<std::size_t>(m)];
  }
  return fail;
}

double worst_level_failure(int shots, int grid) {
  double worst = 0.0;
  for (int i = 0; i <= grid; ++i) worst = std::max(worst, level_failure(shots, 0.125 * i / grid));
  return worst;
}

namespace {

struct StitchStep {
  bool ok;
  std::uint64_t next;
};

// One refinement: state B over den (β = B/den) to level j with midpoint idx.
StitchStep stitch_step(std::uint64_t b, std::uint64_t den, int idx, int levels, int j) {
  const std::uint64_t den2 = 2 * den;
  const std::uint64_t c0 = b, c1 = b + den;
  const std::uint64_t mid = static_cast<std::uint64_t>(idx) * (den2 / 8);
  auto dist = [&](std::uint64_t x) {
    const std::uint64_t d = x > mid ? x - mid : mid - x;
    return std::min(d, den2 - d);
  };
  const std::uint64_t tol = (std::uint64_t{1} << (levels - 1 - j)) + 4;
  const std::uint64_t d0 = dist(c0), d1 = dist(c1);
  const std::uint64_t pick = d1 < d0 ? c1 : c0;
  const std::uint64_t dp = std::min(d0, d1);
  return StitchStep{dp <= tol, pick};
}

}  // namespace

std::optional<std::uint64_t> stitch(const std::vector<int>& idx) {
  const int l = static_cast<int>(idx.size());
  if (l < 1 || l > 60) throw InvalidArgument("stitch: bad level count");
  for (int v : idx) {
    if (v < 0 || v > 7) throw InvalidArgument("stitch: midpoint index must be in [0,8)");
  }
  std::uint64_t b = static_cast<std::uint64_t>(idx[static_cast<std::size_t>(l - 1)]);
  std::uint64_t den = 8;
  for (int j = l - 2; j >= 0; --j) {
    const auto st = stitch_step(b, den, idx[static_cast<std::size_t>(j)], l, j);
    if (!st.ok) return std::nullopt;
    b = st.next;
    den *= 2;
  }
  return b;
}

StitchDistribution stitch_distribution(const std::vector<LevelDistribution>& levels) {
  const int l = static_cast<int>(levels.size());
  if (l < 1 || l > 40) throw InvalidArgument("stitch_distribution: bad level count");
  StitchDistribution out;
  std::map<std::uint64_t, double> cur;
  for (int m = 0; m < 8; ++m) {
    const double p = levels[static_cast<std::size_t>(l - 1)][static_cast<std::size_t>(m)];
    if (p > 0) cur[static_cast<std::uint64_t>(m)] += p;
  }
  std::uint64_t den = 8;
  for (int j = l - 2; j >= 0; --j) {
    std::map<std::uint64_t, double> next;
    for (const auto& [b, pb] : cur) {
      for (int m = 0; m < 8; ++m) {
        const double pm = levels[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
        if (pm <= 0) continue;
        const auto st = stitch_step(b, den, m, l, j);
        if (st.ok) {
          next[st.next] += pb * pm;
        } else {
          out.failure += pb * pm;
        }
      }
    }
    cur = std::move(next);
    den *= 2;
  }
  out.numerators = std::move(cur);
  return out;
}

}  // namespace kitaev
