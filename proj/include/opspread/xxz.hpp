#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "opspread/marginals.hpp"
#include "opspread/operator_mps.hpp"

namespace opspread {

/// Disordered XXZ chain, open boundaries:
///   H = sum_j [ J/2 (s+_j s-_{j+1} + h.c.) + Delta/4 sz_j sz_{j+1} ]
///     + sum_j h_j/2 sz_j,   h_j uniform in [-W, W].
/// The hopping J sets the energy scale and stays at 1.
struct XXZParams {
  int num_sites = 2;
  double hopping = 1.0;
  double delta = 0.0;
  double disorder = 0.0;  // W

  void validate() const {
    if (num_sites < 2) throw std::invalid_argument("XXZParams: L >= 2");
    if (disorder < 0.0) throw std::invalid_argument("XXZParams: W >= 0");
  }
};

struct DisorderRealization {
  Eigen::VectorXd fields;  // h_1 .. h_L
  std::uint64_t seed = 0;
};

/// Deterministic fields from the seed, one uniform draw per site.
DisorderRealization sample_disorder(const XXZParams& params,
                                    std::uint64_t seed);

/// 4x4 Hermitian bond term for sites (j, j+1), j 1-based in [1, L-1].
/// Onsite fields are split half/half onto the two bonds adjacent to an
/// interior site; boundary sites put their full field on their only bond,
/// so the bond terms sum to H exactly.
Eigen::Matrix4cd bond_hamiltonian(const XXZParams& params,
                                  const DisorderRealization& realization,
                                  int bond);

/// 16x16 real orthogonal matrix of the adjoint action O -> U O U^dag,
/// U = exp(i * bond_h * dt), in the two-site normalized Pauli basis:
/// G_{nu,mu} = Tr[P_nu U P_mu U^dag]. Raises if the result fails the
/// realness or orthogonality tolerance of 1e-10.
Eigen::MatrixXd adjoint_gate(const Eigen::Matrix4cd& bond_h, double dt);

struct EvolutionConfig {
  double dt = 0.05;
  double t_max = 100.0;
  int trotter_order = 2;  // 1 or 2 (Strang)
  std::vector<double> sample_times;  // sorted, within [0, t_max]
  double cutoff = kDefaultCutoff;
  int chi_max = kDefaultChiMax;
  double fail_threshold = 1e-4;  // cumulative discarded weight budget
  bool abort_on_budget = true;
  bool record_distributions = false;

  void validate() const;
};

struct TimeSeries {
  std::vector<double> times;
  std::vector<double> mean_length;
  std::vector<double> mean_mass;
  std::vector<double> integrated_renyi2;
  std::vector<Eigen::VectorXd> renyi2_bonds;
  std::vector<int> max_chi;
  std::vector<double> cumulative_discarded;
  std::vector<double> norm_error;  // |norm^2 - 1| at each sample
  std::vector<MarginalDistribution> length_dists;  // when recorded
  std::vector<MarginalDistribution> mass_dists;    // when recorded
  // first time the chi budget saturated with discarded weight over threshold
  std::optional<double> budget_exceeded_at;
};

struct EvolveAbort : std::runtime_error {
  EvolveAbort(double t, int chi, double discarded)
      : std::runtime_error(
            "evolution aborted at t=" + std::to_string(t) + ": chi_max " +
            std::to_string(chi) +
            " saturated with cumulative discarded weight " +
            std::to_string(discarded)),
        time(t),
        chi(chi),
        discarded(discarded) {}
  double time;
  int chi;
  double discarded;
};

/// Second-order Trotter evolution (half even bonds, odd bonds, half even) of
/// the operator state in the Heisenberg picture, sampling observables at the
/// requested times. Sample times are hit exactly; a leftover fraction of dt
/// is applied as a smaller final step before sampling. The state is evolved
/// in place and holds the final-time operator on return.
TimeSeries evolve(OperatorMPS& mps, const XXZParams& params,
                  const DisorderRealization& realization,
                  const EvolutionConfig& cfg);

}  // namespace opspread
