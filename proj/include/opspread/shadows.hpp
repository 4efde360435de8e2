#pragma once

#include <cstdint>
#include <vector>

#include "opspread/marginals.hpp"
#include "opspread/pauli.hpp"

namespace opspread::shadows {

/// Statevector cap: 2L qubits, 4^L amplitudes.
constexpr int kMaxShadowSites = 6;

/// Doubled system-ancilla state of 2L qubits in pair-interleaved order
/// (s_1 a_1 s_2 a_2 ...); within a pair the index is 2 z_s + z_a.
struct ChoiState {
  Eigen::VectorXcd amplitudes;  // dimension 4^L
  int num_sites = 0;
};

/// Bell-pair encoding of the vectorized operator: the Pauli amplitude A_mu
/// multiplies the product of per-pair Bell vectors (sigma^mu x I)|Phi+>.
/// Unit norm for unit-norm input.
ChoiState choi_state_of(const ChoiVector& pauli_amplitudes);

/// One measured shot: per-pair outcome bits and the decoded Pauli string
/// under the fixed map 00->I, 01->Z, 10->X, 11->Y.
struct ShadowSnapshot {
  std::vector<std::uint8_t> pair_outcomes;  // one 2-bit value per pair
  PauliString decoded;
};

/// Outcome bits (z_s, z_a) of a pair -> Pauli code.
PauliCode decode_pair_outcome(std::uint8_t outcome);

/// The 24 single-qubit Cliffords, generated from {H, S} with canonical
/// phases, in a fixed deterministic order.
const std::vector<Eigen::Matrix2cd>& single_qubit_cliffords();

/// Applies R_i (x) R_i^* per pair, R_i drawn uniformly from the single-qubit
/// Clifford group. Preserves the length and mass marginals exactly.
ChoiState apply_random_pair_cliffords(const ChoiState& state,
                                      std::uint64_t seed);

/// Applies the fixed per-pair Bell-measurement Clifford and samples
/// `n_shots` computational-basis outcomes from the exact probabilities.
/// Shots are drawn in fixed-size batches with per-batch substream seeds, so
/// the result is independent of threading.
std::vector<ShadowSnapshot> bell_sample(const ChoiState& state,
                                        std::int64_t n_shots,
                                        std::uint64_t seed);

struct MarginalEstimate {
  MarginalDistribution length;
  MarginalDistribution mass;
  Eigen::VectorXd length_stderr;  // sqrt(p(1-p)/N) per bin
  Eigen::VectorXd mass_stderr;
  std::int64_t n_shots = 0;
};

MarginalEstimate estimate_marginals(const std::vector<ShadowSnapshot>& shots);

/// Exact post-measurement marginals of a Choi state: enumerates all 4^L
/// outcome probabilities and bins by decoded length/mass. Oracle for the
/// estimator and for the Clifford-invariance checks.
struct ExactMarginalsFromState {
  MarginalDistribution length;
  MarginalDistribution mass;
};
ExactMarginalsFromState exact_outcome_marginals(const ChoiState& state);

}  // namespace opspread::shadows
