#pragma once

#include "opspread/marginals.hpp"
#include "opspread/pauli.hpp"
#include "opspread/xxz.hpp"

namespace opspread::ed {

struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXcd eigenvectors;

  /// Diagonalizes a Hermitian operator; raises if the reconstruction
  /// ||V D V^dag - H||_max exceeds 1e-10.
  static SpectralDecomposition of(const DenseOperator& h);
};

/// Dense 2^L x 2^L XXZ Hamiltonian built directly from the basis-state
/// action (independently of bond_hamiltonian). L <= 12.
DenseOperator dense_hamiltonian(const XXZParams& params,
                                const DisorderRealization& realization);

/// O(t) = e^{iHt} O e^{-iHt} through the spectral decomposition.
DenseOperator evolve_exact(const DenseOperator& o,
                           const SpectralDecomposition& spec, double t);
DenseOperator evolve_exact(const DenseOperator& o, const DenseOperator& h,
                           double t);

struct ExactMarginals {
  MarginalDistribution length;
  MarginalDistribution mass;
  double mean_length = 0.0;
  double mean_mass = 0.0;
};

/// Full marginals by enumerating all 4^L Pauli amplitudes with the
/// single-configuration sum (2^L work per string). L <= 8. Runs over fixed
/// index chunks in parallel; results are independent of the thread count.
ExactMarginals exact_marginals(const DenseOperator& o);

/// Plain sequential reference of the same enumeration, kept for tests and
/// the kernel benchmark.
ExactMarginals exact_marginals_serial(const DenseOperator& o);

/// -ln[ sum |A|^4 / (sum |A|^2)^2 ]; zero iff a single Pauli string. L <= 8.
double operator_magic(const DenseOperator& o);

/// Partial-trace fast path: S~2(l), l = 0..L, in O(L 4^L). Works to L <= 12.
Eigen::VectorXd partial_purity_dense(const DenseOperator& o);

/// Length marginal and mean from the partial-trace profile (fast path).
MarginalDistribution length_marginal_dense(const DenseOperator& o);

/// Mean mass via the identity-projector norms,
/// m = L - sum_j ||Tr_j O||_F^2 / (2 ||O||_F^2), in O(L 4^L).
double mean_mass_dense(const DenseOperator& o);

/// Per-bond operator-entanglement Renyi-2 entropies of the vectorized
/// operator, from SVDs of the reshaped Choi vector. L <= 8.
Eigen::VectorXd operator_entanglement_renyi2(const DenseOperator& o);

}  // namespace opspread::ed
