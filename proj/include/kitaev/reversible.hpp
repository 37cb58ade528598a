#pragma once

// Garbage-free constructions: F_τ, bijections, controlled gates Λ(U),
// control re-parameterization, integer-controlled powers and rotations.
// Each construction returns its own register map; ancillas start and end
// at zero.

#include <cstdint>
#include <functional>
#include <vector>

#include "kitaev/boolean_circuit.hpp"
#include "kitaev/gate.hpp"

namespace kitaev {

struct ReversibleProgram {
  OperationSequence seq;
  Register io;   // input-output register
  Register aux;  // auxiliary register W, zero before and after
  std::size_t declared_length = 0;
};

/// τ_n[A,B]: one τ per bit pair, B_i ^= A_i.
void append_tau_n(OperationSequence& seq, const Register& a, const Register& b);

/// (u,v) -> (u, v ⊕ F(u)) with length exactly 2L+m.
/// Layout: u = [0,n), v = [n,n+m), aux = [n+m, n+m+L).
ReversibleProgram make_f_tau(const BooleanCircuit& c);

/// F_τ placed on caller qubits.
OperationSequence f_tau_onto(const BooleanCircuit& c, const Register& u, const Register& v, const Register& aux,
                             int memory_size);

/// |x,0> -> |G(x),0> for x in the domain with length exactly 2L+2L'+4n.
/// Layout: X = [0,n), Y = [n,2n), aux = [2n, 2n+max(L,L')).
/// `in_domain` restricts N ⊆ B^n (all of B^n when empty). Consistency of
/// the two circuits is checked exhaustively for n <= 10, by 1000 random
/// probes above.
ReversibleProgram make_bijection(const BooleanCircuit& fwd, const BooleanCircuit& inv,
                                 const std::function<bool(std::uint64_t)>& in_domain = {},
                                 std::uint64_t probe_seed = 0);

/// Λ(U) for U fixing |0>, length exactly 4n+1, U used once.
/// Layout: control = 0, A = [1, n+1), aux B = [n+1, 2n+1).
ReversibleProgram controlled_fixing_zero(const Gate& u);

struct SingleQubitDecomposition {
  Matrix v;      // u = V^{-1} W V e^{iφ}
  Matrix w;      // W|0> = |0>
  double phi;
};

SingleQubitDecomposition decompose_single_qubit(const Matrix& u);

/// Λ(u) for a 2x2 unitary: V[A], Λ(W) via controlled_fixing_zero, V^{-1}[A],
/// Λ(e^{iφ})[c]. Layout: control = 0, A = 1, aux = 2.
ReversibleProgram controlled_single_qubit(const Matrix& u);

/// F_T = Λ(𝒰∘F) from T = Λ(𝒰) (control width l = F's output count) with
/// length exactly 2L+1, T used once. Layout: a = [0,k), payload register
/// [k, k+p), aux = [k+p, k+p+L). F's taps must be distinct wires.
ReversibleProgram control_reparam(const BooleanCircuit& f, const Gate& t);

/// Rotation family R: |θ,ξ> -> |θ> ⊗ R_{2πθ/2^b}|ξ>, built from Λ(R_{2π·2^{-s}}),
/// s = 1..b. Layout: θ = [0,b) msb-first, target = b.
OperationSequence rotation_gate(int theta_bits);

/// Quantizes an angle to b bits: round(θ·2^b/2π) mod 2^b.
std::uint64_t quantize_angle(double theta, int theta_bits);

/// R_{2πθ/2^b} for a classical θ as the product of the R_{2π·2^{-s}} factors
/// selected by θ's bits, each optionally under `controls` = `trigger`.
void append_rotation(OperationSequence& seq, std::uint64_t theta, int theta_bits, QubitId target,
                     const Register& controls = {}, std::uint64_t trigger = 0);

/// U^[0,r] with r = 2^l - 1; powers by repeated squaring.
Gate integer_controlled_power(const Gate& u, int l);
/// U^(2^s) for s = 0..l-1.
std::vector<Gate> power_ladder(const Gate& u, int l);

/// Moves bit i of X to position perm[i] using n zeroed ancillas Y and 4n τ.
/// Layout: X = [0,n), Y = [n,2n).
ReversibleProgram permute_bits(const std::vector<int>& perm);

}  // namespace kitaev
