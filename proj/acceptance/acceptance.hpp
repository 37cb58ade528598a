#pragma once

// Acceptance suite: one check per criterion, tolerances pinned in
// criteria.cpp.

#include <cstdint>
#include <string>
#include <vector>

namespace kitaev::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

/// Runs the selected criteria (all when `only` is empty) with a fixed seed.
std::vector<CriterionResult> run(std::uint64_t seed, const std::vector<int>& only = {});

CriterionResult run_one(int id, std::uint64_t seed);

/// "PASS  C01 xi-statistics  ...  (0.4 s)"
std::string format_line(const CriterionResult& r);

}  // namespace kitaev::acceptance
