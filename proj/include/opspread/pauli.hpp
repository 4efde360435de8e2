#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <vector>

namespace opspread {

using Complex = std::complex<double>;

/// Single-site Pauli label. Code 0 is the identity; 1,2,3 are X,Y,Z.
enum class PauliCode : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

constexpr int kPhysDim = 4;

/// Maximum chain length for which dense 2^L x 2^L objects are built.
constexpr int kDenseMaxSites = 10;
/// Maximum chain length for full 4^L amplitude enumeration.
constexpr int kChoiEnumMaxSites = 8;

/// Ordered list of per-site Pauli codes for a chain of L >= 1 sites.
struct PauliString {
  std::vector<PauliCode> codes;

  PauliString() = default;
  explicit PauliString(std::vector<PauliCode> c) : codes(std::move(c)) {}

  int num_sites() const { return static_cast<int>(codes.size()); }
};

/// Number of non-identity sites in the string, in [0, L].
int string_mass(const PauliString& q);

/// Position (1-based) of the rightmost non-identity site; 0 for the identity.
int string_length(const PauliString& q);

/// Site-major linear index of a string: site 1 is the most significant
/// base-4 digit, codes ordered (I,X,Y,Z) = (0,1,2,3). Every module indexes
/// amplitude vectors with this convention.
std::uint64_t pauli_index(const PauliString& q);
PauliString pauli_string_of_index(std::uint64_t index, int num_sites);

char pauli_char(PauliCode c);
std::string pauli_string_to_text(const PauliString& q);

/// Dense 2^L x 2^L operator on the chain Hilbert space.
struct DenseOperator {
  Eigen::MatrixXcd matrix;
  int num_sites = 0;
  bool hermitian = false;

  DenseOperator() = default;
  /// Checks dimension 2^L and, when `hermitian` is set, Hermiticity to 1e-12.
  DenseOperator(Eigen::MatrixXcd m, int sites, bool herm);
};

/// Real amplitude vector over the 4^L normalized Pauli strings,
/// A_idx = Tr[O * P_idx] with P the unit-trace-norm strings.
struct ChoiVector {
  Eigen::VectorXd amplitudes;
  int num_sites = 0;

  double norm_squared() const { return amplitudes.squaredNorm(); }
};

/// 2x2 Pauli matrix for the code (identity for code 0).
Eigen::Matrix2cd pauli_matrix(PauliCode code);

/// sigma^mu / sqrt(2); satisfies Tr[s^mu s^nu] = delta_{mu,nu}.
Eigen::Matrix2cd normalized_pauli_matrix(PauliCode code);

/// Dense 2^L x 2^L matrix of an (unnormalized) Pauli string.
Eigen::MatrixXcd pauli_string_matrix(const PauliString& q);

/// Tr[Q O] for the unnormalized string Q, evaluated as a single sum over the
/// 2^L configurations (for each (s_j, alpha_j) exactly one s_j' contributes).
Complex amplitude(const DenseOperator& o, const PauliString& q);

/// All 4^L normalized-basis amplitudes of a dense operator. For operators
/// flagged Hermitian, imaginary parts above 1e-12 raise; below they are
/// dropped.
ChoiVector dense_to_choi(const DenseOperator& o);

/// Reconstructs the dense operator O = sum_idx A_idx P_idx.
DenseOperator choi_to_dense(const ChoiVector& v);

}  // namespace opspread
