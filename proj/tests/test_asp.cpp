#include <doctest.h>

#include <algorithm>
#include <array>
#include <map>

#include "kitaev/asp.hpp"
#include "kitaev/errors.hpp"
#include "oracles.hpp"

using namespace kitaev;

namespace {

std::vector<BigInt> big(const GroupElement& g) { return {g.begin(), g.end()}; }

const PermutationTable& table_of(const Gate& g) { return *std::get<gates::Permutation>(g.kind()).table; }

}  // namespace

TEST_CASE("group action axioms") {
  const auto act = modular_action({2, 3}, 35);
  Rng rng(1, "axioms");
  const auto pts = orbit(act);
  for (int t = 0; t < 200; ++t) {
    const GroupElement g{rng.uniform_int(-20, 20), rng.uniform_int(-20, 20)};
    const GroupElement h{rng.uniform_int(-20, 20), rng.uniform_int(-20, 20)};
    const std::uint64_t x = pts[static_cast<std::size_t>(rng.uniform_int(0, static_cast<long long>(pts.size()) - 1))];
    CHECK(act.apply({0, 0}, x) == x);
    CHECK(act.apply({g[0] + h[0], g[1] + h[1]}, x) == act.apply(g, act.apply(h, x)));
  }
  CHECK_THROWS_AS(act.apply({std::int64_t{1} << 40, 0}, 1), DomainViolation);
  CHECK_THROWS_AS(modular_action({5}, 35), InvalidArgument);
}

TEST_CASE("modular action matches powmod") {
  const auto act = modular_action({2}, 15);
  for (std::int64_t m = -10; m <= 10; ++m) {
    const std::uint64_t e = static_cast<std::uint64_t>(((m % 4) + 4) % 4);
    CHECK(act.apply({m}, 1) == oracle::powmod(2, e, 15));
  }
  CHECK(orbit(act).size() == 4);
}

TEST_CASE("generator ladder") {
  const auto act = modular_action({2}, 5);
  const auto ladder = orbit_generator_ladder(act, 0, 4);
  REQUIRE(ladder.size() == 4);
  for (std::uint64_t x : {1, 2, 3, 4}) {
    CHECK(table_of(ladder[0])(x) == 2 * x % 5);
    CHECK(table_of(ladder[1])(x) == 4 * x % 5);
    CHECK(table_of(ladder[2])(x) == x);
    const auto inv = table_of(ladder[0].inverse());
    CHECK(inv(table_of(ladder[0])(x)) == x);
  }
  CHECK_FALSE(table_of(ladder[0]).defined(0));
  CHECK_THROWS_AS(orbit_generator_ladder(act, 1, 3), InvalidArgument);
}

TEST_CASE("trivial action has a trivial stabilizer problem") {
  const auto act = trivial_action(2, 2, 3);
  Rng rng(2, "trivial");
  for (int t = 0; t < 5; ++t) {
    const Character h = sample_character(act, 0.05, rng);
    REQUIRE(h.size() == 2);
    CHECK(h[0] == 0);
    CHECK(h[1] == 0);
  }
  CHECK(solve_asp(act, rng).basis == IntMatrix::identity(2));
}

TEST_CASE("characters of a 4-cycle are uniform") {
  const auto act = modular_action({2}, 5);
  const double eps = 0.01;
  const CharacterSampler sampler(act, eps);
  Rng rng(3, "uniform");
  std::map<BigRational, int> counts;
  const int draws = 400;
  for (int t = 0; t < draws; ++t) ++counts[sampler.sample(rng)[0]];
  CHECK(counts.size() <= 4);
  for (long long a = 0; a < 4; ++a) {
    const double f = counts[BigRational(a, 4)] / static_cast<double>(draws);
    CHECK(std::abs(f - 0.25) <= 0.1 + eps);
  }
}

TEST_CASE("sampled characters annihilate the stabilizer") {
  // 6 = 3^3 mod 7, so (3, -1) and (0, 2) fix 1
  const auto act = modular_action({3, 6}, 7);
  CHECK(act.fixes_base({3, -1}));
  CHECK(act.fixes_base({0, 2}));
  const CharacterSampler sampler(act, 0.02);
  Rng rng(4, "annihilate");
  SamplingStats stats;
  for (int t = 0; t < 60; ++t) {
    const Character h = sampler.sample(rng, &stats);
    CHECK(character_annihilates(h, big({3, -1})));
    CHECK(character_annihilates(h, big({0, 2})));
    CHECK(character_annihilates(h, big({6, 0})));
  }
  CHECK(stats.phase.gate_calls > 0);
  CHECK(stats.phase.shots == stats.phase.gate_calls);
}

TEST_CASE("stabilizer reconstruction") {
  Rng rng(5, "solve");
  const auto r1 = solve_asp(modular_action({2}, 15), rng);
  CHECK(r1.basis == IntMatrix::from_columns({{4}}));
  CHECK(r1.samples_used == static_cast<std::size_t>(4 + 4));
  CHECK(r1.epsilon_used == doctest::Approx(1.0 / (6.0 * 1 * 8)));

  const auto act = modular_action({3, 6}, 7);
  SamplingStats acc;
  const auto r2 = solve_asp(act, rng, &acc);
  CHECK(lattice_contains(r2.basis, big({3, -1})));
  CHECK(determinant_of_canonical(r2.basis) == 6);
  for (std::size_t j = 0; j < 2; ++j) {
    const auto col = r2.basis.column(j);
    CHECK(act.fixes_base({static_cast<std::int64_t>(col[0]), static_cast<std::int64_t>(col[1])}));
  }
  CHECK(acc.phase.gate_calls == r2.stats.phase.gate_calls);
}

TEST_CASE("stabilizer agrees with a brute-force orbit search") {
  Rng rng(6, "bruteforce");
  for (auto [g, n] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{2, 9}, {3, 10}, {5, 12}, {7, 13}}) {
    const auto r = solve_asp(modular_action({g}, n), rng);
    CHECK(r.basis == IntMatrix::from_columns({{static_cast<long long>(oracle::order_of(g, n))}}));
  }
}

TEST_CASE("order finding") {
  Rng rng(7, "order");
  CHECK(find_order(1, 15, rng) == 1);
  CHECK(find_order(2, 15, rng) == 4);
  CHECK(find_order(4, 7, rng) == 3);
  RunCounters c;
  CHECK(find_order(3, 22, rng, 8, &c) == oracle::order_of(3, 22));
  CHECK(c.gate_calls > 0);
  CHECK(c.apply_calls > 0);
  CHECK(c.attempts >= 1);
  CHECK_THROWS_AS(find_order(3, 15, rng), InvalidArgument);
}

TEST_CASE("factoring") {
  Rng rng(8, "factor");
  for (auto [n, p, q] : std::vector<std::array<std::uint64_t, 3>>{{15, 3, 5}, {21, 3, 7}, {33, 3, 11}, {35, 5, 7}}) {
    RunCounters c;
    const auto f = factor(n, rng, 20, &c);
    CHECK(std::min(f.p, f.q) == p);
    CHECK(std::max(f.p, f.q) == q);
    CHECK(f.bases_tried >= 1);
    // a base sharing a factor with n splits it without any blackbox call
    CHECK(c.attempts <= static_cast<std::uint64_t>(f.bases_tried));
    CHECK((c.attempts == 0) == (c.gate_calls == 0));
  }
  CHECK_THROWS_AS(factor(13, rng), InvalidArgument);
  CHECK_THROWS_AS(factor(9, rng), InvalidArgument);
  CHECK_THROWS_AS(factor(16, rng), InvalidArgument);
}

TEST_CASE("discrete logarithm") {
  Rng rng(9, "dlog");
  CHECK(discrete_log(7, 3, 1, rng) == 0);
  CHECK(discrete_log(7, 3, 6, rng) == 3);
  CHECK(discrete_log(11, 2, 9, rng) == 6);
  for (std::uint64_t g = 1; g < 13; ++g) {
    const std::uint64_t m = discrete_log(13, 2, g, rng);
    CHECK(oracle::powmod(2, m, 13) == g);
    CHECK(m < 12);
  }
  CHECK_THROWS_AS(discrete_log(7, 2, 3, rng), InvalidArgument);
}

TEST_CASE("number theory helpers") {
  for (std::uint64_t n = 2; n < 200; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n; ++d) prime &= n % d != 0;
    CHECK(is_prime(n) == prime);
  }
  CHECK(is_prime_power(27));
  CHECK(is_prime_power(49));
  CHECK_FALSE(is_prime_power(15));
  CHECK(is_primitive_root(3, 7));
  CHECK_FALSE(is_primitive_root(2, 7));
  CHECK(classical_order(2, 15) == 4);
  CHECK(bit_length(0) == 0);
  CHECK(bit_length(14) == 4);
}
