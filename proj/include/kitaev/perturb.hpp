#pragma once

#include "kitaev/gate.hpp"
#include "kitaev/rng.hpp"

namespace kitaev {

/// Replaces every matrix-type gate of arity <= 3 (unitary1, dense, phase,
/// and the classical basis gates) by e^{iδH}U for a random Hermitian H of
/// unit operator norm, so ‖Ũ − U‖ <= δ. Semantic gates are kept exact.
OperationSequence perturb_sequence(const OperationSequence& seq, double delta, Rng& rng);

/// e^{iδH} with H random Hermitian, ‖H‖ = 1, on 2^arity dimensions.
Matrix random_near_identity(int arity, double delta, Rng& rng);

}  // namespace kitaev
