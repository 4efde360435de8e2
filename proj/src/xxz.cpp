#include "opspread/xxz.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "opspread/rng.hpp"

namespace opspread {

namespace {

Eigen::Matrix2cd sigma_z() {
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  return z;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

DisorderRealization sample_disorder(const XXZParams& params,
                                    std::uint64_t seed) {
  params.validate();
  Rng rng(seed);
  DisorderRealization r;
  r.seed = seed;
  r.fields.resize(params.num_sites);
  for (int j = 0; j < params.num_sites; ++j)
    r.fields[j] = rng.uniform_symmetric(params.disorder);
  return r;
}

Eigen::Matrix4cd bond_hamiltonian(const XXZParams& params,
                                  const DisorderRealization& realization,
                                  int bond) {
  params.validate();
  const int L = params.num_sites;
  if (bond < 1 || bond > L - 1)
    throw std::out_of_range("bond_hamiltonian: bond out of range");
  if (realization.fields.size() != L)
    throw std::invalid_argument("bond_hamiltonian: field vector length");

  Eigen::Matrix4cd h = Eigen::Matrix4cd::Zero();
  // J/2 (s+ s- + s- s+): flips |01> <-> |10>
  h(1, 2) += params.hopping / 2.0;
  h(2, 1) += params.hopping / 2.0;
  // Delta/4 sz sz
  const Eigen::Matrix4cd zz = kron2(sigma_z(), sigma_z());
  h += (params.delta / 4.0) * zz;
  // onsite fields, half-weight on interior sites
  const double w_left = (bond == 1) ? 1.0 : 0.5;
  const double w_right = (bond == L - 1) ? 1.0 : 0.5;
  h += w_left * (realization.fields[bond - 1] / 2.0) *
       kron2(sigma_z(), Eigen::Matrix2cd::Identity());
  h += w_right * (realization.fields[bond] / 2.0) *
       kron2(Eigen::Matrix2cd::Identity(), sigma_z());
  return h;
}

Eigen::MatrixXd adjoint_gate(const Eigen::Matrix4cd& bond_h, double dt) {
  const double herm_dev = (bond_h - bond_h.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-12)
    throw std::invalid_argument("adjoint_gate: bond Hamiltonian not Hermitian");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(bond_h);
  const Eigen::Vector4d evals = es.eigenvalues();
  Eigen::Vector4cd phases;
  for (int a = 0; a < 4; ++a)
    phases[a] = std::complex<double>(std::cos(evals[a] * dt),
                                     std::sin(evals[a] * dt));
  const Eigen::Matrix4cd u =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  // two-site normalized Pauli strings, index (mu1, mu2) -> 4 mu1 + mu2
  std::array<Eigen::Matrix4cd, 16> basis;
  for (int mu1 = 0; mu1 < 4; ++mu1)
    for (int mu2 = 0; mu2 < 4; ++mu2)
      basis[static_cast<size_t>(4 * mu1 + mu2)] =
          kron2(normalized_pauli_matrix(static_cast<PauliCode>(mu1)),
                normalized_pauli_matrix(static_cast<PauliCode>(mu2)));

  Eigen::MatrixXd gate(16, 16);
  for (int mu = 0; mu < 16; ++mu) {
    const Eigen::Matrix4cd conj =
        u * basis[static_cast<size_t>(mu)] * u.adjoint();
    for (int nu = 0; nu < 16; ++nu) {
      const std::complex<double> entry =
          (basis[static_cast<size_t>(nu)] * conj).trace();
      if (std::abs(entry.imag()) > 1e-10)
        throw std::runtime_error("adjoint_gate: imaginary residue " +
                                 std::to_string(entry.imag()));
      gate(nu, mu) = entry.real();
    }
  }
  const double ortho_dev =
      (gate.transpose() * gate - Eigen::MatrixXd::Identity(16, 16))
          .cwiseAbs()
          .maxCoeff();
  if (ortho_dev > 1e-10)
    throw std::runtime_error("adjoint_gate: orthogonality deviation " +
                             std::to_string(ortho_dev));
  return gate;
}

void EvolutionConfig::validate() const {
  if (dt <= 0.0) throw std::invalid_argument("EvolutionConfig: dt > 0");
  if (trotter_order != 1 && trotter_order != 2)
    throw std::invalid_argument("EvolutionConfig: trotter_order in {1,2}");
  if (sample_times.empty())
    throw std::invalid_argument("EvolutionConfig: no sample times");
  if (!std::is_sorted(sample_times.begin(), sample_times.end()))
    throw std::invalid_argument("EvolutionConfig: sample times not sorted");
  if (sample_times.front() < 0.0 || sample_times.back() > t_max + 1e-9)
    throw std::invalid_argument(
        "EvolutionConfig: sample times outside [0, t_max]");
}

namespace {

class GateCache {
 public:
  GateCache(const XXZParams& params, const DisorderRealization& realization)
      : params_(params), realization_(realization) {}

  const std::vector<Eigen::MatrixXd>& gates(double dt) {
    const std::uint64_t key = std::bit_cast<std::uint64_t>(dt);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    std::vector<Eigen::MatrixXd> gates;
    gates.reserve(static_cast<size_t>(params_.num_sites - 1));
    for (int bond = 1; bond <= params_.num_sites - 1; ++bond)
      gates.push_back(
          adjoint_gate(bond_hamiltonian(params_, realization_, bond), dt));
    return cache_.emplace(key, std::move(gates)).first->second;
  }

 private:
  const XXZParams& params_;
  const DisorderRealization& realization_;
  std::map<std::uint64_t, std::vector<Eigen::MatrixXd>> cache_;
};

struct StepStats {
  double discarded = 0.0;
  int max_chi = 1;
};

// one sweep over the given bond parity; bonds are 1-based, gate g acts on
// 0-based sites (g-1, g)
StepStats sweep(OperatorMPS& mps, const std::vector<Eigen::MatrixXd>& gates,
                int first_bond, const EvolutionConfig& cfg, bool ascending) {
  StepStats stats;
  const int L = mps.num_sites();
  if (ascending) {
    for (int bond = first_bond; bond <= L - 1; bond += 2) {
      const TruncationReport rep = mps.apply_two_site_gate(
          gates[static_cast<size_t>(bond - 1)], bond - 1, cfg.cutoff,
          cfg.chi_max, /*move_right=*/true);
      stats.discarded += rep.discarded_weight;
      stats.max_chi = std::max(stats.max_chi, rep.chi_after);
    }
  } else {
    int bond = first_bond;
    while (bond + 2 <= L - 1) bond += 2;
    for (; bond >= first_bond; bond -= 2) {
      const TruncationReport rep = mps.apply_two_site_gate(
          gates[static_cast<size_t>(bond - 1)], bond - 1, cfg.cutoff,
          cfg.chi_max, /*move_right=*/false);
      stats.discarded += rep.discarded_weight;
      stats.max_chi = std::max(stats.max_chi, rep.chi_after);
    }
  }
  return stats;
}

}  // namespace

TimeSeries evolve(OperatorMPS& mps, const XXZParams& params,
                  const DisorderRealization& realization,
                  const EvolutionConfig& cfg) {
  params.validate();
  cfg.validate();
  const int L = params.num_sites;
  if (mps.num_sites() != L)
    throw std::invalid_argument("evolve: state/params size mismatch");
  if (std::abs(mps.norm_squared() - 1.0) > 1e-12) mps.normalize();

  GateCache cache(params, realization);
  TimeSeries series;
  double t = 0.0;
  double discarded_cum = 0.0;
  int chi_watermark = 1;

  auto do_step = [&](double step_dt) {
    StepStats stats;
    if (cfg.trotter_order == 2) {
      const auto& half_even = cache.gates(step_dt / 2.0);
      const auto& full_odd = cache.gates(step_dt);
      StepStats s1 = sweep(mps, half_even, 2, cfg, /*ascending=*/true);
      StepStats s2 = sweep(mps, full_odd, 1, cfg, /*ascending=*/false);
      StepStats s3 = sweep(mps, half_even, 2, cfg, /*ascending=*/true);
      stats.discarded = s1.discarded + s2.discarded + s3.discarded;
      stats.max_chi = std::max({s1.max_chi, s2.max_chi, s3.max_chi});
    } else {
      const auto& full = cache.gates(step_dt);
      StepStats s1 = sweep(mps, full, 2, cfg, /*ascending=*/true);
      StepStats s2 = sweep(mps, full, 1, cfg, /*ascending=*/false);
      stats.discarded = s1.discarded + s2.discarded;
      stats.max_chi = std::max(s1.max_chi, s2.max_chi);
    }
    discarded_cum += stats.discarded;
    chi_watermark = std::max(chi_watermark, stats.max_chi);
    if (stats.max_chi >= cfg.chi_max && discarded_cum > cfg.fail_threshold) {
      if (!series.budget_exceeded_at) series.budget_exceeded_at = t;
      if (cfg.abort_on_budget)
        throw EvolveAbort(t, cfg.chi_max, discarded_cum);
    }
  };

  auto sample = [&](double time) {
    mps.canonicalize(CanonicalForm::Left);
    series.times.push_back(time);
    double nsq = 0.0;
    for (int mu = 0; mu < kPhysDim; ++mu)
      nsq += mps.site(L - 1)[mu].squaredNorm();
    series.norm_error.push_back(std::abs(nsq - 1.0));
    series.mean_length.push_back(mean_length(mps));
    series.mean_mass.push_back(mean_mass(mps));
    const EntanglementProfile prof = entanglement_profile(mps);
    series.integrated_renyi2.push_back(prof.integrated_renyi2);
    series.renyi2_bonds.push_back(prof.bond_entropies_renyi2);
    series.max_chi.push_back(static_cast<int>(mps.max_bond_dim()));
    series.cumulative_discarded.push_back(discarded_cum);
    if (cfg.record_distributions) {
      series.length_dists.push_back(length_distribution(mps));
      series.mass_dists.push_back(mass_distribution(mps));
    }
  };

  for (double target : cfg.sample_times) {
    if (target > t + 1e-12) {
      const auto n_full = static_cast<long long>(
          std::floor((target - t) / cfg.dt + 1e-9));
      for (long long i = 0; i < n_full; ++i) {
        do_step(cfg.dt);
        t += cfg.dt;
      }
      const double rem = target - t;
      if (rem > 1e-9 * cfg.dt) do_step(rem);
      t = target;
    }
    sample(t);
  }
  return series;
}

}  // namespace opspread
