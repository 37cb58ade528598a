#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>

#include "acceptance.hpp"

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks, one line per criterion"};
  std::uint64_t seed = 20240601;
  std::vector<int> only;
  app.add_option("--seed", seed, "root seed");
  app.add_option("criteria", only, "criterion ids to run (default: all)")->check(CLI::Range(1, 12));
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (int id = 1; id <= kitaev::acceptance::kCriterionCount; ++id) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto r = kitaev::acceptance::run_one(id, seed);
    std::printf("%s\n", kitaev::acceptance::format_line(r).c_str());
    std::fflush(stdout);
    failed += !r.pass;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
