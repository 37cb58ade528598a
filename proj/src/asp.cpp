#include "kitaev/asp.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "kitaev/errors.hpp"

namespace kitaev {

GroupAction::GroupAction(int k, int n, std::uint64_t a, Fn fn)
    : k_(k), n_(n), a_(a), fn_(std::move(fn)), calls_(std::make_shared<std::uint64_t>(0)) {
  if (k < 1) throw InvalidArgument("GroupAction: rank must be positive");
  if (n < 1 || n > 20) throw InvalidArgument("GroupAction: coding width out of range");
  if (a >> n) throw InvalidArgument("GroupAction: base point wider than n bits");
  if (!fn_) throw InvalidArgument("GroupAction: missing blackbox");
}

std::uint64_t GroupAction::apply(const GroupElement& g, std::uint64_t x) const {
  if (static_cast<int>(g.size()) != k_) throw DimensionMismatch("GroupAction: element has wrong rank");
  // size(g), size(-g) <= s
  const std::int64_t lim = std::int64_t{1} << (size_bits() - 1);
  for (std::int64_t v : g) {
    if (v <= -lim || v >= lim) throw DomainViolation("GroupAction: element exceeds the coding width");
  }
  ++*calls_;
  const std::uint64_t y = fn_(g, x);
  if (y >> n_) throw DomainViolation("GroupAction: image does not fit in n bits");
  return y;
}

std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  if (m == 1) return 0;
  unsigned __int128 r = 1, x = b % m;
  while (e) {
    if (e & 1U) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
  std::int64_t t = 0, nt = 1;
  std::int64_t r = static_cast<std::int64_t>(m), nr = static_cast<std::int64_t>(a % m);
  while (nr != 0) {
    const std::int64_t q = r / nr;
    t = std::exchange(nt, t - q * nt);
    r = std::exchange(nr, r - q * nr);
  }
  if (r != 1) throw InvalidArgument("mod_inverse: not a unit");
  if (t < 0) t += static_cast<std::int64_t>(m);
  return static_cast<std::uint64_t>(t);
}

std::uint64_t signed_pow(std::uint64_t b, std::uint64_t binv, std::int64_t e, std::uint64_t m) {
  return e >= 0 ? mod_pow(b, static_cast<std::uint64_t>(e), m) : mod_pow(binv, static_cast<std::uint64_t>(-e), m);
}

}  // namespace

int bit_length(std::uint64_t v) {
  int b = 0;
  while (v) {
    ++b;
    v >>= 1;
  }
  return b;
}

GroupAction modular_action(const std::vector<std::uint64_t>& gens, std::uint64_t modulus) {
  if (modulus < 2) throw InvalidArgument("modular_action: modulus must be at least 2");
  if (gens.empty()) throw InvalidArgument("modular_action: need at least one generator");
  std::vector<std::uint64_t> inv;
  for (std::uint64_t g : gens) {
    if (std::gcd(g % modulus, modulus) != 1) throw InvalidArgument("modular_action: generator is not a unit");
    inv.push_back(mod_inverse(g % modulus, modulus));
  }
  const int n = std::max(1, bit_length(modulus - 1));
  auto fn = [gens, inv, modulus](const GroupElement& m, std::uint64_t x) {
    if (x >= modulus || std::gcd(x, modulus) != 1) throw DomainViolation("modular_action: point is not a unit mod N");
    unsigned __int128 y = x;
    for (std::size_t j = 0; j < gens.size(); ++j) y = y * signed_pow(gens[j], inv[j], m[j], modulus) % modulus;
    return static_cast<std::uint64_t>(y);
  };
  return GroupAction(static_cast<int>(gens.size()), n, 1, fn);
}

GroupAction trivial_action(int k, int n, std::uint64_t a) {
  return GroupAction(k, n, a, [](const GroupElement&, std::uint64_t x) { return x; });
}

GroupElement unit_element(int k, int j, std::int64_t scale) {
  GroupElement e(static_cast<std::size_t>(k), 0);
  e.at(static_cast<std::size_t>(j)) = scale;
  return e;
}

std::vector<std::uint64_t> orbit(const GroupAction& action) {
  std::vector<std::uint64_t> seen{action.base_point()};
  std::vector<char> mark(std::size_t{1} << action.n(), 0);
  mark[action.base_point()] = 1;
  std::deque<std::uint64_t> todo{action.base_point()};
  while (!todo.empty()) {
    const std::uint64_t x = todo.front();
    todo.pop_front();
    for (int j = 0; j < action.k(); ++j) {
      for (std::int64_t sgn : {1, -1}) {
        const std::uint64_t y = action.apply(unit_element(action.k(), j, sgn), x);
        if (!mark[y]) {
          mark[y] = 1;
          seen.push_back(y);
          todo.push_back(y);
        }
      }
    }
  }
  return seen;
}

std::vector<Gate> orbit_generator_ladder(const GroupAction& action, int j, int exponent_bits) {
  if (j < 0 || j >= action.k()) throw InvalidArgument("orbit_generator_ladder: generator index out of range");
  if (exponent_bits < 1) throw InvalidArgument("orbit_generator_ladder: need at least one exponent bit");
  const auto pts = orbit(action);
  std::vector<char> in_orbit(std::size_t{1} << action.n(), 0);
  for (std::uint64_t x : pts) in_orbit[x] = 1;
  std::vector<Gate> out;
  for (int s = 0; s < exponent_bits; ++s) {
    if (s <= action.size_bits() - 2) {
      std::vector<std::uint64_t> map(std::size_t{1} << action.n(), PermutationTable::kUndefined);
      const GroupElement g = unit_element(action.k(), j, std::int64_t{1} << s);
      for (std::uint64_t x : pts) {
        const std::uint64_t y = action.apply(g, x);
        if (!in_orbit[y]) throw DomainViolation("orbit_generator_ladder: image left the orbit");
        map[x] = y;
      }
      out.push_back(Gate::permutation(PermutationTable(action.n(), std::move(map))));
    } else {
      const auto& prev = std::get<gates::Permutation>(out.back().kind());
      out.push_back(Gate::permutation(prev.table->compose(*prev.table)));
    }
  }
  return out;
}

Gate orbit_generator_gate(const GroupAction& action, int j, int exponent_bits) {
  std::vector<GatePtr> ps;
  for (auto& g : orbit_generator_ladder(action, j, exponent_bits)) ps.push_back(std::make_shared<const Gate>(std::move(g)));
  return Gate(gates::IntegerControlled{exponent_bits, std::move(ps)});
}

CharacterSampler::CharacterSampler(const GroupAction& act, double e) : action(&act), eps(e) {
  if (!(e > 0.0 && e < 0.5)) throw InvalidArgument("sample_character: eps must lie in (0, 1/2)");
  for (int j = 0; j < act.k(); ++j) ladders.push_back(orbit_generator_ladder(act, j, 2 * act.n() + 1));
}

Character CharacterSampler::sample(Rng& rng, SamplingStats* stats) const {
  const int n = action->n();
  StateVector state(n + 1);
  const Register reg = make_register(1, n);
  state.set_register(reg, action->base_point());
  Character h;
  PhaseStats local;
  PhaseStats* ps = stats ? &stats->phase : &local;
  for (int j = 0; j < action->k(); ++j) {
    RationalPhase phi;
    try {
      phi = measure_eigenvalue_in_place(state, reg, 0, ladders[static_cast<std::size_t>(j)], n, eps, rng, ps);
    } catch (const SoftFailure&) {
      if (stats) ++stats->retries;
      phi = measure_eigenvalue_in_place(state, reg, 0, ladders[static_cast<std::size_t>(j)], n, eps, rng, ps);
    }
    // λ_h(V_j) = exp(-2πi h_j)
    h.push_back(BigRational(static_cast<long long>((phi.q - phi.p) % phi.q), static_cast<long long>(phi.q)));
  }
  return h;
}

Character sample_character(const GroupAction& action, double eps, Rng& rng, SamplingStats* stats) {
  return CharacterSampler(action, eps).sample(rng, stats);
}

ASPSolution solve_asp(const GroupAction& action, Rng& rng, SamplingStats* acc) {
  const int k = action.k();
  const int l = action.n() + 4;
  const double eps = 1.0 / (6.0 * k * l);
  const CharacterSampler sampler(action, eps);
  ASPSolution sol;
  sol.epsilon_used = eps;
  auto flush = [&] {
    if (!acc) return;
    acc->phase.gate_calls += sol.stats.phase.gate_calls;
    acc->phase.shots += sol.stats.phase.shots;
    acc->retries += sol.stats.retries;
  };
  try {
    for (int i = 0; i < l; ++i) sol.samples.push_back(sampler.sample(rng, &sol.stats));
  } catch (...) {
    flush();
    throw;
  }
  flush();
  sol.samples_used = sol.samples.size();
  sol.basis = characters_to_lattice(sol.samples, static_cast<std::size_t>(k));
  for (std::size_t c = 0; c < sol.basis.cols(); ++c) {
    GroupElement g;
    for (const BigInt& v : sol.basis.column(c)) g.push_back(static_cast<std::int64_t>(v));
    if (!action.fixes_base(g)) throw VerificationFailure("solve_asp: canonical column does not fix the base point");
  }
  return sol;
}

namespace {

// adds the action's classical calls and the sampled gate calls on scope exit
struct Tally {
  RunCounters* counters;
  const GroupAction& action;
  SamplingStats stats;
  ~Tally() {
    if (!counters) return;
    counters->gate_calls += stats.phase.gate_calls;
    counters->apply_calls += action.apply_calls();
  }
};

}  // namespace

std::uint64_t find_order(std::uint64_t g, std::uint64_t modulus, Rng& rng, int max_attempts, RunCounters* counters) {
  if (modulus < 2 || g < 1 || g >= modulus) throw InvalidArgument("find_order: need 1 <= g < N");
  if (std::gcd(g, modulus) != 1) throw InvalidArgument("find_order: gcd(g, N) != 1");
  const GroupAction action = modular_action({g}, modulus);
  Tally tally{counters, action, {}};
  for (int t = 0; t < max_attempts; ++t) {
    if (counters) ++counters->attempts;
    try {
      return static_cast<std::uint64_t>(solve_asp(action, rng, &tally.stats).basis(0, 0));
    } catch (const SoftFailure&) {
    }
  }
  throw SoftFailure("find_order: every attempt failed verification");
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

bool is_prime_power(std::uint64_t n) {
  if (n < 2) return false;
  std::uint64_t p = 2;
  while (n % p != 0) {
    if (p * p > n) return true;  // n itself prime
    ++p;
  }
  while (n % p == 0) n /= p;
  return n == 1;
}

std::uint64_t classical_order(std::uint64_t g, std::uint64_t modulus) {
  if (std::gcd(g, modulus) != 1) throw InvalidArgument("classical_order: not a unit");
  std::uint64_t x = g % modulus, r = 1;
  while (x != 1 % modulus) {
    x = static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * g % modulus);
    ++r;
  }
  return r;
}

bool is_primitive_root(std::uint64_t zeta, std::uint64_t q) {
  if (!is_prime(q) || zeta % q == 0) return false;
  std::uint64_t m = q - 1;
  auto check = [&](std::uint64_t p) { return mod_pow(zeta, (q - 1) / p, q) != 1; };
  for (std::uint64_t p = 2; p * p <= m; ++p) {
    if (m % p != 0) continue;
    if (!check(p)) return false;
    while (m % p == 0) m /= p;
  }
  if (m > 1 && !check(m)) return false;
  return true;
}

Factorization factor(std::uint64_t modulus, Rng& rng, int max_bases, RunCounters* counters) {
  if (modulus < 9 || modulus % 2 == 0) throw InvalidArgument("factor: need an odd composite");
  if (is_prime(modulus)) throw InvalidArgument("factor: input is prime");
  if (is_prime_power(modulus)) throw InvalidArgument("factor: input is a prime power");
  Factorization f;
  for (int t = 0; t < max_bases; ++t) {
    ++f.bases_tried;
    const auto b = static_cast<std::uint64_t>(rng.uniform_int(2, static_cast<std::int64_t>(modulus) - 2));
    std::uint64_t d = std::gcd(b, modulus);
    if (d == 1) {
      std::uint64_t r = 0;
      try {
        r = find_order(b, modulus, rng, 1, counters);
      } catch (const SoftFailure&) {
        continue;
      }
      if (r % 2 != 0) continue;
      const std::uint64_t y = mod_pow(b, r / 2, modulus);
      if (y == modulus - 1) continue;
      d = std::gcd(y + modulus - 1, modulus);
    }
    if (d > 1 && d < modulus) {
      f.p = std::min(d, modulus / d);
      f.q = modulus / f.p;
      return f;
    }
  }
  throw SoftFailure("factor: base retry cap exhausted");
}

std::uint64_t discrete_log(std::uint64_t q, std::uint64_t zeta, std::uint64_t g, Rng& rng, int max_attempts,
                           RunCounters* counters) {
  if (!is_prime(q)) throw InvalidArgument("discrete_log: modulus must be prime");
  if (!is_primitive_root(zeta, q)) throw InvalidArgument("discrete_log: zeta is not a primitive root");
  if (g < 1 || g >= q) throw InvalidArgument("discrete_log: need 1 <= g < q");
  const GroupAction action = modular_action({zeta, g}, q);
  Tally tally{counters, action, {}};
  for (int t = 0; t < max_attempts; ++t) {
    if (counters) ++counters->attempts;
    try {
      const ASPSolution sol = solve_asp(action, rng, &tally.stats);
      // (m12, 1) is a column iff some (m, -1) lies in the lattice
      if (sol.basis(1, 1) != 1) throw VerificationFailure("discrete_log: no element of the form (m, -1)");
      BigInt m = -sol.basis(0, 1);
      const BigInt order = q - 1;
      m %= order;
      if (m < 0) m += order;
      const auto mm = static_cast<std::uint64_t>(m);
      if (mod_pow(zeta, mm, q) != g % q) throw VerificationFailure("discrete_log: zeta^m != g");
      return mm;
    } catch (const SoftFailure&) {
    }
  }
  throw SoftFailure("discrete_log: every attempt failed verification");
}

}  // namespace kitaev
