#pragma once

// The Abelian Stabilizer Problem: blackbox actions of Z^k on coded sets,
// character sampling through eigenvalue measurement, stabilizer
// reconstruction, and the order / factoring / discrete-log front ends.

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/lattice.hpp"
#include "kitaev/phase_estimation.hpp"
#include "kitaev/rng.hpp"

namespace kitaev {

using GroupElement = std::vector<std::int64_t>;

/// F: Z^k × M → M with M ⊆ B^n, base point a.
///
/// Group elements are coded as s-bit two's-complement components with
/// s = n + 4; apply() rejects elements outside that range, so every call
/// stays within Z^k_s.
class GroupAction {
 public:
  using Fn = std::function<std::uint64_t(const GroupElement&, std::uint64_t)>;

  GroupAction(int k, int n, std::uint64_t a, Fn fn);

  int k() const { return k_; }
  int n() const { return n_; }
  std::uint64_t base_point() const { return a_; }
  int size_bits() const { return n_ + 4; }

  /// Blackbox evaluation. Throws DomainViolation when g is too wide or the
  /// image does not fit in n bits.
  std::uint64_t apply(const GroupElement& g, std::uint64_t x) const;
  bool fixes_base(const GroupElement& g) const { return apply(g, a_) == a_; }

  std::uint64_t apply_calls() const { return *calls_; }
  void reset_calls() const { *calls_ = 0; }

 private:
  int k_;
  int n_;
  std::uint64_t a_;
  Fn fn_;
  std::shared_ptr<std::uint64_t> calls_;
};

/// F(m, x) = g_1^{m_1} ... g_k^{m_k} x mod N on the units, a = 1,
/// n = bit length of N - 1. Throws InvalidArgument if some g_j is not a unit.
GroupAction modular_action(const std::vector<std::uint64_t>& gens, std::uint64_t modulus);

/// F(g, x) = x.
GroupAction trivial_action(int k, int n, std::uint64_t a = 0);

/// e_j as a group element of Z^k.
GroupElement unit_element(int k, int j, std::int64_t scale = 1);

/// Orbit of the base point, in BFS order, found with classical calls.
std::vector<std::uint64_t> orbit(const GroupAction& action);

/// Λ-ready ladder V_j^(2^s), s = 0..exponent_bits-1, as permutation gates on
/// the orbit. Powers whose exponent fits the coding width are read from the
/// blackbox as apply(2^s e_j, ·); wider ones come from squaring.
std::vector<Gate> orbit_generator_ladder(const GroupAction& action, int j, int exponent_bits);

/// The same ladder packed as U^[0,r].
Gate orbit_generator_gate(const GroupAction& action, int j, int exponent_bits);

struct SamplingStats {
  PhaseStats phase;
  std::uint64_t retries = 0;
};

/// Prepares |a>, measures φ_1..φ_k in sequence on the same register and
/// returns h_j = -φ_j mod 1. A failed measurement is retried once.
Character sample_character(const GroupAction& action, double eps, Rng& rng, SamplingStats* stats = nullptr);

/// Ladders for every generator, built once and reused across samples.
struct CharacterSampler {
  CharacterSampler(const GroupAction& action, double eps);
  Character sample(Rng& rng, SamplingStats* stats = nullptr) const;

  const GroupAction* action;
  double eps;
  std::vector<std::vector<Gate>> ladders;
};

struct ASPSolution {
  IntMatrix basis;
  std::size_t samples_used = 0;
  double epsilon_used = 0.0;
  std::vector<Character> samples;
  SamplingStats stats;
};

/// l = n + 4 samples at ε = 1/(6kl), lattice reconstruction and a direct
/// check apply(g, a) = a on every canonical column. Throws
/// VerificationFailure when a column does not fix a. Sampling counters are
/// also added to `acc`, which sees them even when verification fails.
ASPSolution solve_asp(const GroupAction& action, Rng& rng, SamplingStats* acc = nullptr);

struct RunCounters {
  std::uint64_t gate_calls = 0;   // controlled-power invocations
  std::uint64_t apply_calls = 0;  // classical blackbox evaluations
  std::uint64_t attempts = 0;
};

/// Order of g in (Z/N)^*, retrying soft failures up to max_attempts.
std::uint64_t find_order(std::uint64_t g, std::uint64_t modulus, Rng& rng, int max_attempts = 8,
                         RunCounters* counters = nullptr);

struct Factorization {
  std::uint64_t p = 0;
  std::uint64_t q = 0;
  int bases_tried = 0;
};

/// Nontrivial split of an odd composite that is not a prime power.
/// Throws InvalidArgument on bad input and SoftFailure when no base works.
Factorization factor(std::uint64_t modulus, Rng& rng, int max_bases = 20, RunCounters* counters = nullptr);

/// m with zeta^m = g mod q, found from the element (m, -1) of the stabilizer
/// of F(m1, m2, x) = zeta^m1 g^m2 x.
std::uint64_t discrete_log(std::uint64_t q, std::uint64_t zeta, std::uint64_t g, Rng& rng, int max_attempts = 8,
                           RunCounters* counters = nullptr);

// number theory helpers
std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, std::uint64_t m);
bool is_prime(std::uint64_t n);
bool is_prime_power(std::uint64_t n);
bool is_primitive_root(std::uint64_t zeta, std::uint64_t q);
std::uint64_t classical_order(std::uint64_t g, std::uint64_t modulus);
int bit_length(std::uint64_t v);

}  // namespace kitaev
