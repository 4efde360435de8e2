#include "opspread/marginals.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace opspread {

namespace {

constexpr double kClipFloor = -1e-8;

// left-canonical view of the state: either the input itself or a copy
const OperatorMPS& left_canonical(const OperatorMPS& mps, OperatorMPS& store) {
  const bool ok = (mps.form() == CanonicalForm::Left) ||
                  (mps.form() == CanonicalForm::Mixed &&
                   mps.center() == mps.num_sites() - 1);
  if (ok) return mps;
  store = mps;
  store.canonicalize(CanonicalForm::Left);
  return store;
}

}  // namespace

double MarginalDistribution::mean() const {
  double m = 0.0;
  for (Eigen::Index l = 0; l < probs.size(); ++l)
    m += static_cast<double>(l) * probs[l];
  return m;
}

MarginalDistribution make_marginal(MarginalKind kind, Eigen::VectorXd raw,
                                   int num_sites, const char* origin) {
  for (Eigen::Index i = 0; i < raw.size(); ++i) {
    if (raw[i] < kClipFloor)
      throw std::runtime_error(std::string(origin) +
                               ": probability entry below -1e-8 (" +
                               std::to_string(raw[i]) + ") at bin " +
                               std::to_string(i));
    if (raw[i] < 0.0) raw[i] = 0.0;
  }
  const double total = raw.sum();
  if (total <= 0.0)
    throw std::runtime_error(std::string(origin) + ": distribution sums to 0");
  raw /= total;
  return MarginalDistribution{kind, std::move(raw), num_sites};
}

Eigen::VectorXd partial_purity_profile(const OperatorMPS& mps) {
  OperatorMPS store;
  const OperatorMPS& m = left_canonical(mps, store);
  const int L = m.num_sites();

  // norm is local to the last site in this gauge
  double nsq = 0.0;
  for (int mu = 0; mu < kPhysDim; ++mu)
    nsq += m.site(L - 1)[mu].squaredNorm();
  if (std::abs(nsq - 1.0) > 1e-6)
    throw std::runtime_error(
        "partial_purity_profile: state is not unit-norm (norm^2 = " +
        std::to_string(nsq) + ")");

  Eigen::VectorXd profile(L + 1);
  profile[L] = 1.0;
  const Eigen::Index chi_max = m.max_bond_dim();
  Eigen::VectorXd cur(chi_max), next(chi_max);
  Eigen::Index n = 1;
  cur[0] = 1.0;
  for (int l = L - 1; l >= 0; --l) {
    // project trailing sites onto the identity index
    const Eigen::MatrixXd& block = m.site(l)[0];
    next.head(block.rows()).noalias() = block * cur.head(n);
    cur.swap(next);
    n = block.rows();
    profile[l] = cur.head(n).squaredNorm() / nsq;
  }
  return profile;
}

MarginalDistribution length_distribution(const OperatorMPS& mps) {
  const Eigen::VectorXd s2 = partial_purity_profile(mps);
  const int L = mps.num_sites();
  Eigen::VectorXd p(L + 1);
  p[0] = s2[0];
  for (int l = 1; l <= L; ++l) p[l] = s2[l] - s2[l - 1];
  return make_marginal(MarginalKind::Length, std::move(p), L,
                       "length_distribution");
}

double mean_length(const OperatorMPS& mps) {
  const Eigen::VectorXd s2 = partial_purity_profile(mps);
  const int L = mps.num_sites();
  return static_cast<double>(L) - s2.head(L).sum();
}

double mean_mass(const OperatorMPS& mps) {
  // aux-dim-2 MPO over the diagonal weights d(mu) = 1 - delta_{mu,0}:
  // env[1] has not yet inserted a mass term, env[0] has
  const int L = mps.num_sites();
  Eigen::MatrixXd plain = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(1, 1);
  for (int j = 0; j < L; ++j) {
    const SiteTensor& t = mps.site(j);
    const Eigen::Index cr = t.right_dim();
    Eigen::MatrixXd next_plain = Eigen::MatrixXd::Zero(cr, cr);
    Eigen::MatrixXd next_acc = Eigen::MatrixXd::Zero(cr, cr);
    for (int mu = 0; mu < kPhysDim; ++mu) {
      const Eigen::MatrixXd half = plain * t[mu];
      next_plain.noalias() += t[mu].transpose() * half;
      if (mu != 0) next_acc.noalias() += t[mu].transpose() * half;
      next_acc.noalias() += t[mu].transpose() * (acc * t[mu]);
    }
    plain.swap(next_plain);
    acc.swap(next_acc);
  }
  return acc(0, 0);
}

std::complex<double> mass_generating_function(const OperatorMPS& mps,
                                              double lambda) {
  // per-site factor exp(i lambda) on the three non-identity indices
  const double c = std::cos(lambda), s = std::sin(lambda);
  Eigen::MatrixXd re = Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(1, 1);
  for (int j = 0; j < mps.num_sites(); ++j) {
    const SiteTensor& t = mps.site(j);
    const Eigen::Index cr = t.right_dim();
    Eigen::MatrixXd p0_re(cr, cr), p0_im(cr, cr);
    Eigen::MatrixXd p1_re = Eigen::MatrixXd::Zero(cr, cr);
    Eigen::MatrixXd p1_im = Eigen::MatrixXd::Zero(cr, cr);
    p0_re.noalias() = t[0].transpose() * (re * t[0]);
    p0_im.noalias() = t[0].transpose() * (im * t[0]);
    for (int mu = 1; mu < kPhysDim; ++mu) {
      p1_re.noalias() += t[mu].transpose() * (re * t[mu]);
      p1_im.noalias() += t[mu].transpose() * (im * t[mu]);
    }
    re = p0_re + c * p1_re - s * p1_im;
    im = p0_im + c * p1_im + s * p1_re;
  }
  return {re(0, 0), im(0, 0)};
}

MarginalDistribution mass_distribution(const OperatorMPS& mps) {
  const int L = mps.num_sites();
  const double alpha = 2.0 * std::numbers::pi / (L + 1);

  std::vector<std::complex<double>> g(static_cast<size_t>(L) + 1);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k <= L; ++k)
    g[static_cast<size_t>(k)] = mass_generating_function(mps, alpha * k);

  Eigen::VectorXd p(L + 1);
  for (int m = 0; m <= L; ++m) {
    std::complex<double> sum(0.0, 0.0);
    for (int k = 0; k <= L; ++k) {
      const double phase = -alpha * k * m;
      sum += std::complex<double>(std::cos(phase), std::sin(phase)) *
             g[static_cast<size_t>(k)];
    }
    sum /= static_cast<double>(L + 1);
    if (std::abs(sum.imag()) > 1e-8)
      throw std::runtime_error(
          "mass_distribution: imaginary residue above 1e-8 (" +
          std::to_string(sum.imag()) + ")");
    p[m] = sum.real();
  }
  return make_marginal(MarginalKind::Mass, std::move(p), L,
                       "mass_distribution");
}

EntanglementProfile entanglement_profile(const OperatorMPS& mps) {
  const int L = mps.num_sites();
  const std::vector<Eigen::VectorXd> spectra = mps.schmidt_spectra();
  EntanglementProfile out;
  out.bond_entropies_vn.resize(L - 1);
  out.bond_entropies_renyi2.resize(L - 1);
  for (int b = 0; b < L - 1; ++b) {
    double vn = 0.0, purity = 0.0;
    for (double lam : spectra[static_cast<size_t>(b)]) {
      const double w = lam * lam;
      if (w > 0.0) vn -= w * std::log(w);
      purity += w * w;
    }
    out.bond_entropies_vn[b] = vn;
    out.bond_entropies_renyi2[b] = -std::log(purity);
  }
  out.integrated_renyi2 = out.bond_entropies_renyi2.sum();
  return out;
}

}  // namespace opspread
