#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "opspread/pauli.hpp"

namespace opspread {

/// Real rank-3 site tensor with shape (chi_left, 4, chi_right), stored as one
/// chi_left x chi_right block per physical (Pauli) index. Tensors stay real:
/// the adjoint action of a unitary on Hermitian operators is real-linear in
/// the Pauli basis.
class SiteTensor {
 public:
  SiteTensor() = default;
  SiteTensor(Eigen::Index left, Eigen::Index right) {
    for (auto& b : blocks_) b = Eigen::MatrixXd::Zero(left, right);
  }

  Eigen::Index left_dim() const { return blocks_[0].rows(); }
  Eigen::Index right_dim() const { return blocks_[0].cols(); }

  Eigen::MatrixXd& operator[](int mu) { return blocks_[static_cast<size_t>(mu)]; }
  const Eigen::MatrixXd& operator[](int mu) const {
    return blocks_[static_cast<size_t>(mu)];
  }

 private:
  std::array<Eigen::MatrixXd, kPhysDim> blocks_;
};

enum class CanonicalForm { None, Left, Right, Mixed };

struct TruncationReport {
  int bond = 0;  // cut position: number of sites left of the cut, 1..L-1
  double discarded_weight = 0.0;  // sum of squared discarded singular values
  int chi_before = 0;
  int chi_after = 0;
};

/// Matrix-product state over the 4-dimensional Pauli index: the vectorized
/// operator |O> with real amplitudes. Sites are 0-based; bond `l` (1..L-1)
/// cuts the chain into the leftmost l sites and the rest.
///
/// Canonical tags: Left == all sites 0..L-2 left-isometric (center at L-1),
/// Right == center at 0, Mixed == center at center(). Operations that need a
/// particular gauge establish it themselves.
class OperatorMPS {
 public:
  OperatorMPS() = default;
  explicit OperatorMPS(std::vector<SiteTensor> sites);

  /// chi=1 state with amplitude 1 on the given string and 0 elsewhere.
  static OperatorMPS product_operator(const PauliString& q);

  int num_sites() const { return static_cast<int>(sites_.size()); }
  const SiteTensor& site(int j) const { return sites_[static_cast<size_t>(j)]; }
  /// Direct tensor access; invalidates the canonical tag.
  SiteTensor& mutable_site(int j);

  /// chi across bond l in [0, L]; chi_0 = chi_L = 1 for a valid state.
  Eigen::Index bond_dim(int bond) const;
  Eigen::Index max_bond_dim() const;

  CanonicalForm form() const { return form_; }
  int center() const { return center_; }
  /// Accumulated log of normalization factors divided out of the tensors.
  double norm_log() const { return norm_log_; }

  /// Sum of squared amplitudes, contracted in O(L chi^3).
  double norm_squared() const;
  /// Rescales to unit norm; the divided-out factor goes to norm_log().
  void normalize();
  void scale(double factor);

  /// Establishes the requested gauge. The represented vector is unchanged.
  void canonicalize(CanonicalForm target, int center = -1);
  /// Moves the orthogonality center by QR/LQ shifts (requires a tagged form).
  void move_center(int new_center);

  /// One right-to-left sweep of truncated SVDs. Singular values with relative
  /// weight below `cutoff` and all beyond `chi_max` are dropped; the state is
  /// renormalized to unit norm at the end. Reported discarded weights are
  /// absolute, so fidelity to the input equals 1 - sum(discarded).
  std::vector<TruncationReport> truncate(double cutoff, int chi_max);

  /// Schmidt singular values across bond l (descending, sum of squares equals
  /// the squared norm).
  Eigen::VectorXd schmidt_values(int bond) const;
  /// All bonds in one O(L chi^3) sweep; entry l-1 is bond l.
  std::vector<Eigen::VectorXd> schmidt_spectra() const;

  /// Applies a real orthogonal 16x16 gate to sites (left_site, left_site+1)
  /// followed by an SVD split with truncation. The kept singular values are
  /// rescaled to preserve the pre-gate norm. The center ends on the right
  /// site when move_right, else on the left one.
  TruncationReport apply_two_site_gate(const Eigen::MatrixXd& gate,
                                       int left_site, double cutoff,
                                       int chi_max, bool move_right = true);

  /// Full 4^L amplitude vector (site-major index). Enumeration-capped.
  ChoiVector to_choi() const;

  /// Test support: left/right isometry residual of site j.
  double left_isometry_residual(int j) const;
  double right_isometry_residual(int j) const;

  /// Reinstates gauge metadata on tensors that already carry it (checkpoint
  /// loading). The caller asserts the tensors satisfy the claimed form.
  void restore_tag(CanonicalForm form, int center, double norm_log);

 private:
  std::vector<SiteTensor> sites_;
  CanonicalForm form_ = CanonicalForm::None;
  int center_ = -1;
  double norm_log_ = 0.0;

  void shift_center_right(int j);
  void shift_center_left(int j);
  void require_valid_site(int j, const char* where) const;
};

/// Pinned truncation defaults.
constexpr double kDefaultCutoff = 1e-12;
constexpr int kDefaultChiMax = 256;

}  // namespace opspread
