#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "opspread/marginals.hpp"

namespace opspread::lbit {

/// Effective localized-bit chain: commuting tau^z couplings decaying as
/// J_{jl} = W_{jl} e^{-kappa |j-l|}, onsite terms fixed to zero. Only the
/// couplings to site 1 matter for the evolved edge operator, so only those
/// are sampled.
struct LBitParams {
  int num_sites = 64;
  double kappa = 1.0;
  double coupling_width = 1.0;  // W

  void validate() const;
};

struct LBitRealization {
  Eigen::VectorXd couplings;  // J_{j,1} for j = 2..L (size L-1)
  std::uint64_t seed = 0;
};

LBitRealization sample_couplings(const LBitParams& params, std::uint64_t seed);

/// p_j = sin^2(2 J_{j1} t) for j = 2..L: the probability that site j carries
/// tau^z in the evolved operator's string distribution.
Eigen::VectorXd site_flip_probabilities(const LBitRealization& realization,
                                        double t);

/// Closed-form mean operator length of the evolved edge operator,
/// h = prod_j q_j + sum_l l p_l prod_{j>l} q_j with q = 1 - p. O(L).
double lbit_mean_length(const LBitRealization& realization, double t);

/// Closed-form mean mass, m = 1 + sum_j p_j. O(L).
double lbit_mean_mass(const LBitRealization& realization, double t);

/// Brute-force reference: enumerate all 2^{L-1} tau^z patterns with the
/// product weights and bin by string length/mass. The parity of a pattern
/// fixes whether site 1 carries tau^x or tau^y, so each pattern contributes
/// exactly once.
struct EnumeratedMarginals {
  MarginalDistribution length;
  MarginalDistribution mass;
  double mean_length = 0.0;
  double mean_mass = 0.0;
  double even_parity_weight = 0.0;  // + odd = 1 exactly
  double odd_parity_weight = 0.0;
};
EnumeratedMarginals enumerate_marginals(const LBitRealization& realization,
                                        double t);

struct SlopeFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  int n_points = 0;
  double t_saturation = 0.0;  // inf when never saturating on the grid
};

/// Disorder-averaged h(t) on the time grid, then a least-squares fit of
/// h vs ln t inside the window [t_fit_min, t_sat/3], where t_sat is the
/// first time the average exceeds 0.8 L. Raises when the window collapses.
SlopeFit lbit_growth_slope(const LBitParams& params, int n_realizations,
                           std::uint64_t base_seed,
                           const std::vector<double>& t_grid,
                           double t_fit_min = 10.0);

/// Disorder-averaged length/mass curves over the grid (for series output).
struct AveragedCurves {
  std::vector<double> times;
  Eigen::VectorXd mean_length;
  Eigen::VectorXd mean_mass;
};
AveragedCurves averaged_curves(const LBitParams& params, int n_realizations,
                               std::uint64_t base_seed,
                               const std::vector<double>& t_grid);

}  // namespace opspread::lbit
