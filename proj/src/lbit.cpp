#include "opspread/lbit.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "opspread/rng.hpp"

namespace opspread::lbit {

void LBitParams::validate() const {
  if (num_sites < 2) throw std::invalid_argument("LBitParams: L >= 2");
  if (kappa <= 0.0) throw std::invalid_argument("LBitParams: kappa > 0");
  if (coupling_width <= 0.0) throw std::invalid_argument("LBitParams: W > 0");
}

LBitRealization sample_couplings(const LBitParams& params,
                                 std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  LBitRealization r;
  r.seed = seed;
  r.couplings.resize(params.num_sites - 1);
  for (int j = 2; j <= params.num_sites; ++j)
    r.couplings[j - 2] = rng.uniform_symmetric(params.coupling_width) *
                         std::exp(-params.kappa * (j - 1));
  return r;
}

Eigen::VectorXd site_flip_probabilities(const LBitRealization& realization,
                                        double t) {
  if (t < 0.0) throw std::invalid_argument("site_flip_probabilities: t >= 0");
  Eigen::VectorXd p(realization.couplings.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double s = std::sin(2.0 * realization.couplings[i] * t);
    p[i] = s * s;
  }
  return p;
}

double lbit_mean_length(const LBitRealization& realization, double t) {
  const Eigen::VectorXd p = site_flip_probabilities(realization, t);
  const Eigen::Index n = p.size();  // sites 2..L
  // suffix products of q = 1-p: tail[i] = prod_{j>i} q_j
  double h = 0.0;
  double tail = 1.0;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const int site = static_cast<int>(i) + 2;
    h += site * p[i] * tail;
    tail *= 1.0 - p[i];
  }
  h += tail;  // all-identity tail: the string ends at site 1
  return h;
}

double lbit_mean_mass(const LBitRealization& realization, double t) {
  return 1.0 + site_flip_probabilities(realization, t).sum();
}

EnumeratedMarginals enumerate_marginals(const LBitRealization& realization,
                                        double t) {
  const Eigen::Index n = realization.couplings.size();
  const int L = static_cast<int>(n) + 1;
  if (L > 20)
    throw std::invalid_argument("enumerate_marginals: 2^{L-1} patterns, L <= 20");

  // squared amplitudes from the product formula, identical for the even
  // (tau^x at site 1) and odd (tau^y) parity classes
  Eigen::VectorXd cos2(n), sin2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = std::cos(2.0 * realization.couplings[i] * t);
    const double s = std::sin(2.0 * realization.couplings[i] * t);
    cos2[i] = c * c;
    sin2[i] = s * s;
  }

  Eigen::VectorXd length_hist = Eigen::VectorXd::Zero(L + 1);
  Eigen::VectorXd mass_hist = Eigen::VectorXd::Zero(L + 1);
  double even_weight = 0.0, odd_weight = 0.0;
  const std::uint64_t patterns = 1ULL << n;
  for (std::uint64_t mask = 0; mask < patterns; ++mask) {
    double w = 1.0;
    int h = 1, m = 1, parity = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((mask >> i) & 1ULL) {
        w *= sin2[i];
        h = static_cast<int>(i) + 2;
        ++m;
        parity ^= 1;
      } else {
        w *= cos2[i];
      }
    }
    length_hist[h] += w;
    mass_hist[m] += w;
    (parity ? odd_weight : even_weight) += w;
  }

  EnumeratedMarginals out;
  out.length = make_marginal(MarginalKind::Length, std::move(length_hist), L,
                             "lbit enumerate");
  out.mass =
      make_marginal(MarginalKind::Mass, std::move(mass_hist), L, "lbit enumerate");
  out.mean_length = out.length.mean();
  out.mean_mass = out.mass.mean();
  out.even_parity_weight = even_weight;
  out.odd_parity_weight = odd_weight;
  return out;
}

AveragedCurves averaged_curves(const LBitParams& params, int n_realizations,
                               std::uint64_t base_seed,
                               const std::vector<double>& t_grid) {
  params.validate();
  if (n_realizations < 1)
    throw std::invalid_argument("averaged_curves: n_realizations >= 1");
  const Eigen::Index nt = static_cast<Eigen::Index>(t_grid.size());
  std::vector<Eigen::VectorXd> h_slots(static_cast<size_t>(n_realizations));
  std::vector<Eigen::VectorXd> m_slots(static_cast<size_t>(n_realizations));

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < n_realizations; ++r) {
    const LBitRealization realization =
        sample_couplings(params, base_seed + static_cast<std::uint64_t>(r));
    Eigen::VectorXd h(nt), m(nt);
    for (Eigen::Index i = 0; i < nt; ++i) {
      h[i] = lbit_mean_length(realization, t_grid[static_cast<size_t>(i)]);
      m[i] = lbit_mean_mass(realization, t_grid[static_cast<size_t>(i)]);
    }
    h_slots[static_cast<size_t>(r)] = std::move(h);
    m_slots[static_cast<size_t>(r)] = std::move(m);
  }

  AveragedCurves out;
  out.times = t_grid;
  out.mean_length = Eigen::VectorXd::Zero(nt);
  out.mean_mass = Eigen::VectorXd::Zero(nt);
  for (int r = 0; r < n_realizations; ++r) {
    out.mean_length += h_slots[static_cast<size_t>(r)];
    out.mean_mass += m_slots[static_cast<size_t>(r)];
  }
  out.mean_length /= n_realizations;
  out.mean_mass /= n_realizations;
  return out;
}

SlopeFit lbit_growth_slope(const LBitParams& params, int n_realizations,
                           std::uint64_t base_seed,
                           const std::vector<double>& t_grid,
                           double t_fit_min) {
  const AveragedCurves curves =
      averaged_curves(params, n_realizations, base_seed, t_grid);

  double t_sat = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < curves.times.size(); ++i) {
    if (curves.mean_length[static_cast<Eigen::Index>(i)] >
        0.8 * params.num_sites) {
      t_sat = curves.times[i];
      break;
    }
  }
  const double t_fit_max = std::isinf(t_sat)
                               ? curves.times.back()
                               : t_sat / 3.0;
  if (t_fit_max <= t_fit_min)
    throw std::runtime_error(
        "lbit_growth_slope: fit window reaches saturation");

  // least squares of h against ln t
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < curves.times.size(); ++i) {
    const double t = curves.times[i];
    if (t < t_fit_min || t > t_fit_max) continue;
    const double x = std::log(t);
    const double y = curves.mean_length[static_cast<Eigen::Index>(i)];
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 3)
    throw std::runtime_error("lbit_growth_slope: too few points in window");
  const double denom = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / denom;
  const double intercept = (sy - slope * sx) / n;

  double ss_res = 0.0;
  for (size_t i = 0; i < curves.times.size(); ++i) {
    const double t = curves.times[i];
    if (t < t_fit_min || t > t_fit_max) continue;
    const double x = std::log(t);
    const double y = curves.mean_length[static_cast<Eigen::Index>(i)];
    const double resid = y - (slope * x + intercept);
    ss_res += resid * resid;
  }
  const double var_slope = ss_res / (n - 2) * n / denom;

  SlopeFit fit;
  fit.slope = slope;
  fit.stderr_slope = std::sqrt(var_slope);
  fit.intercept = intercept;
  fit.n_points = n;
  fit.t_saturation = t_sat;
  return fit;
}

}  // namespace opspread::lbit
