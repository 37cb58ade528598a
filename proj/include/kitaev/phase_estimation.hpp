#pragma once

// Eigenvalue measurement with the one-ancilla operator Ξ(U) = S Λ(U) S:
// cos/sin estimation, multiscale estimation over controlled powers and
// exact rational recovery by continued fractions.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "kitaev/gate.hpp"
#include "kitaev/rng.hpp"
#include "kitaev/shot_statistics.hpp"
#include "kitaev/state_vector.hpp"

namespace kitaev {

struct RationalPhase {
  std::uint64_t p = 0;
  std::uint64_t q = 1;

  /// Reduced representative of p/q mod 1.
  static RationalPhase make(std::int64_t p, std::int64_t q);
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
  auto operator<=>(const RationalPhase&) const = default;
};

struct PhaseEstimate {
  double value = 0.0;       // in [0,1)
  double precision = 1.0;   // |value - φ| <= precision mod 1 unless failed
  double confidence = 0.0;  // 1 - eps
  std::uint64_t numerator = 0;  // value = numerator / 2^{levels+2}
  int levels = 0;
};

/// Counters shared by a run.
struct PhaseStats {
  std::uint64_t gate_calls = 0;  // controlled-power invocations (one per shot)
  std::uint64_t shots = 0;
};

/// Ξ(U) on memory [ancilla = 0, A = 1..arity]. With i_variant, Λ(e^{iπ/2})
/// on the control precedes Λ(U), which yields Ξ(iU).
OperationSequence xi_operator(const Gate& u, bool i_variant = false);

/// Appends Ξ(U) (or Ξ(iU)) acting on the given ancilla and register.
void append_xi(OperationSequence& seq, const Gate& u, QubitId ancilla, const Register& a, bool i_variant);

struct CosSinEstimate {
  double cos_est = 0.0;
  double sin_est = 0.0;
  int ones_cos = 0;
  int ones_sin = 0;
  int shots = 0;
};

/// Runs Ξ(U) and Ξ(iU) s times each on `state`, each shot with a freshly
/// reset ancilla. cos_est = 1 - 2·freq, sin_est = 2·freq_i - 1.
CosSinEstimate estimate_cos_sin_in_place(StateVector& state, const Register& a, QubitId ancilla, const Gate& u,
                                         int shots, Rng& rng, PhaseStats* stats = nullptr);

/// Same on a freshly prepared register (prepare() gives the register state).
CosSinEstimate estimate_cos_sin(const std::function<StateVector()>& prepare, const Gate& u, int shots, Rng& rng);

/// Localizes 2^j φ for j = 0..l-1 using powers[j] = U^(2^j) and stitches.
/// Throws InconsistentLocalization when stitching fails.
PhaseEstimate multiscale_in_place(StateVector& state, const Register& a, QubitId ancilla,
                                  const std::vector<Gate>& powers, int levels, int shots, Rng& rng,
                                  PhaseStats* stats = nullptr);

/// upow must be an integer-controlled gate U^[0,r] whose ladder covers l
/// levels. Shots per level follow shots_per_level(l, eps).
PhaseEstimate multiscale_estimate(const Gate& upow, int levels, double eps,
                                  const std::function<StateVector()>& prepare, Rng& rng);

/// Given φ' = P/2^{2n+1}, returns the unique p/q, q <= 2^n, within 2^{-2n-1}
/// of φ' mod 1. Throws ReconstructionFailure when none exists.
RationalPhase continued_fraction_recover(const RationalPhase& phi_prime, int n);

/// Nearest point of the 2^{2n+1} grid to a multiscale numerator over
/// 2^{2n+3}.
std::uint64_t round_to_grid(std::uint64_t numerator, int n);

/// Exact eigenvalue measurement on a register already in `state`: multiscale at
/// l = 2n+1 on powers (size >= 2n+1), rounding, then recovery.
RationalPhase measure_eigenvalue_in_place(StateVector& state, const Register& a, QubitId ancilla,
                                          const std::vector<Gate>& powers, int n, double eps, Rng& rng,
                                          PhaseStats* stats = nullptr, int shots_override = 0);

/// u acts on n = u.arity() bits; prepare() gives the n-qubit register state.
RationalPhase measure_eigenvalue_exact(const Gate& u, const std::function<StateVector()>& prepare, double eps,
                                       Rng& rng, PhaseStats* stats = nullptr, int shots_override = 0);

struct ExactPhaseDistribution {
  std::map<RationalPhase, double> outcomes;
  double failure = 0.0;  // stitching or recovery failure
};

/// Exact output distribution of measure_eigenvalue_exact on an eigenstate
/// with phase φ, for s shots per level.
ExactPhaseDistribution exact_phase_distribution(const RationalPhase& phi, int n, int shots);

}  // namespace kitaev
