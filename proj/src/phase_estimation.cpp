#include "kitaev/phase_estimation.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "kitaev/errors.hpp"
#include "kitaev/reversible.hpp"

namespace kitaev {

RationalPhase RationalPhase::make(std::int64_t p, std::int64_t q) {
  if (q <= 0) throw InvalidArgument("RationalPhase: denominator must be positive");
  std::int64_t r = p % q;
  if (r < 0) r += q;
  const std::int64_t g = std::gcd(r, q);
  return RationalPhase{static_cast<std::uint64_t>(r / g), static_cast<std::uint64_t>(q / g)};
}

void append_xi(OperationSequence& seq, const Gate& u, QubitId ancilla, const Register& a, bool i_variant) {
  const Gate s = Gate(gates::Unitary1{s_matrix()});
  seq.add(s, {ancilla});
  if (i_variant) seq.add(Gate::phase(std::numbers::pi / 2), {ancilla});
  seq.add(Gate::controlled(u), concat({ancilla}, a));
  seq.add(s, {ancilla});
}

OperationSequence xi_operator(const Gate& u, bool i_variant) {
  OperationSequence seq;
  seq.memory_size = 1 + u.arity();
  append_xi(seq, u, 0, make_register(1, u.arity()), i_variant);
  seq.input_register = make_register(0, seq.memory_size);
  seq.output_register = {0};
  return seq;
}

CosSinEstimate estimate_cos_sin_in_place(StateVector& state, const Register& a, QubitId ancilla, const Gate& u,
                                         int shots, Rng& rng, PhaseStats* stats) {
  if (shots < 1) throw InvalidArgument("estimate_cos_sin: need at least one shot");
  OperationSequence xc, xs;
  xc.memory_size = xs.memory_size = state.num_qubits();
  append_xi(xc, u, ancilla, a, false);
  append_xi(xs, u, ancilla, a, true);
  CosSinEstimate e;
  e.shots = shots;
  for (int i = 0; i < shots; ++i) {
    run_in_place(state, xc);
    e.ones_cos += measure_and_reset(state, ancilla, rng);
  }
  for (int i = 0; i < shots; ++i) {
    run_in_place(state, xs);
    e.ones_sin += measure_and_reset(state, ancilla, rng);
  }
  if (stats) {
    stats->gate_calls += 2 * static_cast<std::uint64_t>(shots);
    stats->shots += 2 * static_cast<std::uint64_t>(shots);
  }
  e.cos_est = 1.0 - 2.0 * e.ones_cos / shots;
  e.sin_est = 2.0 * e.ones_sin / shots - 1.0;
  return e;
}

namespace {

StateVector with_ancilla(const StateVector& reg) {
  // ancilla is qubit 0, register follows
  StateVector s(reg.num_qubits() + 1);
  auto& amps = s.amplitudes();
  for (std::size_t i = 0; i < reg.dim(); ++i) amps[i] = reg[i];
  return s;
}

}  // namespace

CosSinEstimate estimate_cos_sin(const std::function<StateVector()>& prepare, const Gate& u, int shots, Rng& rng) {
  StateVector s = with_ancilla(prepare());
  return estimate_cos_sin_in_place(s, make_register(1, u.arity()), 0, u, shots, rng);
}

PhaseEstimate multiscale_in_place(StateVector& state, const Register& a, QubitId ancilla,
                                  const std::vector<Gate>& powers, int levels, int shots, Rng& rng,
                                  PhaseStats* stats) {
  if (levels < 1 || static_cast<int>(powers.size()) < levels) {
    throw InvalidArgument("multiscale: power ladder shorter than the level count");
  }
  std::vector<int> idx(static_cast<std::size_t>(levels));
  for (int j = 0; j < levels; ++j) {
    const auto e = estimate_cos_sin_in_place(state, a, ancilla, powers[static_cast<std::size_t>(j)], shots, rng, stats);
    idx[static_cast<std::size_t>(j)] = localize_index(e.ones_cos, e.ones_sin, shots);
  }
  const auto num = stitch(idx);
  if (!num) throw InconsistentLocalization("multiscale: no stitching candidate within tolerance");
  PhaseEstimate pe;
  pe.numerator = *num;
  pe.levels = levels;
  pe.value = std::ldexp(static_cast<double>(*num), -(levels + 2));
  pe.precision = std::ldexp(1.0, -(levels + 2));
  return pe;
}

PhaseEstimate multiscale_estimate(const Gate& upow, int levels, double eps,
                                  const std::function<StateVector()>& prepare, Rng& rng) {
  const auto* ic = std::get_if<gates::IntegerControlled>(&upow.kind());
  if (!ic) throw InvalidArgument("multiscale_estimate: expected an integer-controlled gate");
  std::vector<Gate> powers;
  for (const auto& p : ic->powers) powers.push_back(*p);
  StateVector s = with_ancilla(prepare());
  const int arity = powers.empty() ? 0 : powers.front().arity();
  PhaseEstimate pe = multiscale_in_place(s, make_register(1, arity), 0, powers, levels,
                                         shots_per_level(levels, eps), rng);
  pe.confidence = 1.0 - eps;
  return pe;
}

RationalPhase continued_fraction_recover(const RationalPhase& phi_prime, int n) {
  if (n < 0 || n > 30) throw InvalidArgument("continued_fraction_recover: n out of range");
  const std::uint64_t big_q = std::uint64_t{1} << (2 * n + 1);
  if (phi_prime.q == 0 || big_q % phi_prime.q != 0) {
    throw InvalidArgument("continued_fraction_recover: denominator must divide 2^{2n+1}");
  }
  const std::uint64_t p_big = (phi_prime.p % phi_prime.q) * (big_q / phi_prime.q);
  // tolerance 2^{-2n-1} is one grid step
  if (p_big <= 1 || big_q - p_big <= 1) return RationalPhase{0, 1};
  const std::uint64_t qmax = std::uint64_t{1} << n;
  using i128 = __int128;
  i128 h_prev = 1, h_prev2 = 0, k_prev = 0, k_prev2 = 1;
  std::uint64_t num = p_big, den = big_q;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const i128 h = static_cast<i128>(a) * h_prev + h_prev2;
    const i128 k = static_cast<i128>(a) * k_prev + k_prev2;
    if (k > static_cast<i128>(qmax)) break;
    const i128 diff = static_cast<i128>(p_big) * k - h * static_cast<i128>(big_q);
    if ((diff < 0 ? -diff : diff) <= k) {
      return RationalPhase::make(static_cast<std::int64_t>(h), static_cast<std::int64_t>(k));
    }
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
    const std::uint64_t r = num % den;
    num = den;
    den = r;
  }
  throw ReconstructionFailure("continued fractions: no p/q with q <= 2^n within tolerance");
}

std::uint64_t round_to_grid(std::uint64_t numerator, int n) {
  const std::uint64_t mask = (std::uint64_t{1} << (2 * n + 1)) - 1;
  return ((numerator + 2) >> 2) & mask;
}

RationalPhase measure_eigenvalue_in_place(StateVector& state, const Register& a, QubitId ancilla,
                                          const std::vector<Gate>& powers, int n, double eps, Rng& rng,
                                          PhaseStats* stats, int shots_override) {
  const int levels = 2 * n + 1;
  const int shots = shots_override > 0 ? shots_override : shots_per_level(levels, eps);
  const PhaseEstimate pe = multiscale_in_place(state, a, ancilla, powers, levels, shots, rng, stats);
  const std::uint64_t grid = round_to_grid(pe.numerator, n);
  return continued_fraction_recover(RationalPhase{grid, std::uint64_t{1} << (2 * n + 1)}, n);
}

RationalPhase measure_eigenvalue_exact(const Gate& u, const std::function<StateVector()>& prepare, double eps,
                                       Rng& rng, PhaseStats* stats, int shots_override) {
  if (!std::holds_alternative<gates::Permutation>(u.kind())) {
    throw InvalidArgument("measure_eigenvalue_exact: expected a permutation gate");
  }
  const int n = u.arity();
  const auto powers = power_ladder(u, 2 * n + 1);
  StateVector s = with_ancilla(prepare());
  if (s.num_qubits() != n + 1) throw DimensionMismatch("measure_eigenvalue_exact: prepared register width");
  return measure_eigenvalue_in_place(s, make_register(1, n), 0, powers, n, eps, rng, stats, shots_override);
}

ExactPhaseDistribution exact_phase_distribution(const RationalPhase& phi, int n, int shots) {
  const int levels = 2 * n + 1;
  std::vector<LevelDistribution> lv;
  std::uint64_t pj = phi.p % phi.q;
  for (int j = 0; j < levels; ++j) {
    lv.push_back(level_distribution(shots, static_cast<double>(pj) / static_cast<double>(phi.q)));
    pj = (2 * pj) % phi.q;
  }
  const auto sd = stitch_distribution(lv);
  ExactPhaseDistribution out;
  out.failure = sd.failure;
  const std::uint64_t big_q = std::uint64_t{1} << (2 * n + 1);
  for (const auto& [num, p] : sd.numerators) {
    try {
      out.outcomes[continued_fraction_recover(RationalPhase{round_to_grid(num, n), big_q}, n)] += p;
    } catch (const ReconstructionFailure&) {
      out.failure += p;
    }
  }
  return out;
}

}  // namespace kitaev
