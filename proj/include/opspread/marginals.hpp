#pragma once

#include <complex>

#include "opspread/operator_mps.hpp"

namespace opspread {

enum class MarginalKind { Length, Mass };

/// Probability vector over {0,...,L} for the operator-length or operator-mass
/// marginal. Entries in [-1e-8, 0) are floating-point noise and are clipped
/// to zero (with renormalization); anything below -1e-8 signals a broken
/// canonical form and raises.
struct MarginalDistribution {
  MarginalKind kind = MarginalKind::Length;
  Eigen::VectorXd probs;  // indexed 0..L
  int num_sites = 0;

  double mean() const;
};

MarginalDistribution make_marginal(MarginalKind kind, Eigen::VectorXd raw,
                                   int num_sites, const char* origin);

struct EntanglementProfile {
  Eigen::VectorXd bond_entropies_vn;      // bonds 1..L-1, natural log
  Eigen::VectorXd bond_entropies_renyi2;  // bonds 1..L-1, natural log
  double integrated_renyi2 = 0.0;         // sum over bonds
};

/// Unnormalized Renyi-2 profile S~2(l) = Tr[O_{|l}^2], l = 0..L, i.e. the
/// total squared amplitude of strings supported on the first l sites.
/// One O(L chi^2) right-to-left sweep once the state is left-canonical.
Eigen::VectorXd partial_purity_profile(const OperatorMPS& mps);

/// P(l) = S~2(l) - S~2(l-1), with P(0) = S~2(0).
MarginalDistribution length_distribution(const OperatorMPS& mps);

/// h = L - sum_{l=0}^{L-1} S~2(l).
double mean_length(const OperatorMPS& mps);

/// <O| M |O> with the mass superoperator M = sum_j (1 - |0><0|_j),
/// contracted as an MPO of auxiliary dimension 2 in O(L chi^3).
double mean_mass(const OperatorMPS& mps);

/// G(lambda) = <O| prod_j exp(i lambda (1 - |0><0|_j)) |O>; G(0) = 1 and
/// |G| <= 1 for unit-norm states.
std::complex<double> mass_generating_function(const OperatorMPS& mps,
                                              double lambda);

/// P(m) from the discrete Fourier transform of G over the L+1 angles
/// alpha*k, alpha = 2 pi / (L+1). The independent G evaluations run in
/// parallel; total cost O(L^2 chi^3).
MarginalDistribution mass_distribution(const OperatorMPS& mps);

/// Per-bond von Neumann and Renyi-2 operator entanglement entropies from the
/// Schmidt spectra, plus their sum over bonds.
EntanglementProfile entanglement_profile(const OperatorMPS& mps);

}  // namespace opspread
