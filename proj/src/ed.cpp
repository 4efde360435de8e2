#include "opspread/ed.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace opspread::ed {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

struct MarginalAccumulator {
  Eigen::VectorXd length_hist;
  Eigen::VectorXd mass_hist;
  double total = 0.0;

  explicit MarginalAccumulator(int L)
      : length_hist(Eigen::VectorXd::Zero(L + 1)),
        mass_hist(Eigen::VectorXd::Zero(L + 1)) {}

  void merge(const MarginalAccumulator& other) {
    length_hist += other.length_hist;
    mass_hist += other.mass_hist;
    total += other.total;
  }
};

// |A_Q|^2 of all strings in [begin, end), binned by length and mass
void accumulate_range(const DenseOperator& o, std::uint64_t begin,
                      std::uint64_t end, MarginalAccumulator& acc) {
  const int L = o.num_sites;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const PauliString q = pauli_string_of_index(idx, L);
    const Complex a = amplitude(o, q);
    const double w = std::norm(a);
    acc.length_hist[string_length(q)] += w;
    acc.mass_hist[string_mass(q)] += w;
    acc.total += w;
  }
}

ExactMarginals finalize(const DenseOperator& o, MarginalAccumulator&& acc) {
  require(acc.total > 0.0, "exact_marginals: zero operator");
  ExactMarginals out;
  out.length = make_marginal(MarginalKind::Length,
                             acc.length_hist / acc.total, o.num_sites,
                             "exact_marginals");
  out.mass = make_marginal(MarginalKind::Mass, acc.mass_hist / acc.total,
                           o.num_sites, "exact_marginals");
  out.mean_length = out.length.mean();
  out.mean_mass = out.mass.mean();
  return out;
}

}  // namespace

SpectralDecomposition SpectralDecomposition::of(const DenseOperator& h) {
  require(h.hermitian, "SpectralDecomposition: operator must be Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix);
  SpectralDecomposition spec{es.eigenvalues(), es.eigenvectors()};
  const Eigen::MatrixXcd rebuilt = spec.eigenvectors *
                                   spec.eigenvalues.asDiagonal() *
                                   spec.eigenvectors.adjoint();
  const double dev = (rebuilt - h.matrix).cwiseAbs().maxCoeff();
  if (dev > 1e-10)
    throw std::runtime_error("SpectralDecomposition: reconstruction error " +
                             std::to_string(dev));
  return spec;
}

DenseOperator dense_hamiltonian(const XXZParams& params,
                                const DisorderRealization& realization) {
  params.validate();
  const int L = params.num_sites;
  require(L <= 12, "dense_hamiltonian: L <= 12");
  require(realization.fields.size() == L,
          "dense_hamiltonian: field vector length");

  const Eigen::Index dim = Eigen::Index(1) << L;
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  // bit L-1-j of the basis index holds site j (site 1 most significant);
  // bit value 0 means spin up (sz = +1)
  for (Eigen::Index s = 0; s < dim; ++s) {
    double diag = 0.0;
    for (int j = 0; j < L; ++j) {
      const double zj = ((s >> (L - 1 - j)) & 1) ? -1.0 : 1.0;
      diag += realization.fields[j] / 2.0 * zj;
      if (j + 1 < L) {
        const double zj1 = ((s >> (L - 2 - j)) & 1) ? -1.0 : 1.0;
        diag += params.delta / 4.0 * zj * zj1;
      }
    }
    h(s, s) = diag;
    for (int j = 0; j + 1 < L; ++j) {
      const int bj = static_cast<int>((s >> (L - 1 - j)) & 1);
      const int bj1 = static_cast<int>((s >> (L - 2 - j)) & 1);
      if (bj != bj1) {
        const Eigen::Index flipped =
            s ^ ((Eigen::Index(1) << (L - 1 - j)) |
                 (Eigen::Index(1) << (L - 2 - j)));
        h(flipped, s) += params.hopping / 2.0;
      }
    }
  }
  return DenseOperator(std::move(h), L, /*herm=*/true);
}

DenseOperator evolve_exact(const DenseOperator& o,
                           const SpectralDecomposition& spec, double t) {
  require(o.matrix.rows() == spec.eigenvectors.rows(),
          "evolve_exact: size mismatch");
  const Eigen::MatrixXcd w =
      spec.eigenvectors.adjoint() * o.matrix * spec.eigenvectors;
  const Eigen::Index n = w.rows();
  Eigen::MatrixXcd rotated(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b) {
      const double phi = (spec.eigenvalues[a] - spec.eigenvalues[b]) * t;
      rotated(a, b) = w(a, b) * Complex(std::cos(phi), std::sin(phi));
    }
  Eigen::MatrixXcd out =
      spec.eigenvectors * rotated * spec.eigenvectors.adjoint();
  if (o.hermitian) out = (out + out.adjoint().eval()) / 2.0;
  return DenseOperator(std::move(out), o.num_sites, o.hermitian);
}

DenseOperator evolve_exact(const DenseOperator& o, const DenseOperator& h,
                           double t) {
  return evolve_exact(o, SpectralDecomposition::of(h), t);
}

ExactMarginals exact_marginals(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= kChoiEnumMaxSites, "exact_marginals: L <= 8");
  const std::uint64_t n = 1ULL << (2 * L);

  // fixed chunk decomposition: results do not depend on the thread count
  const std::uint64_t n_chunks = std::min<std::uint64_t>(n, 256);
  const std::uint64_t chunk = (n + n_chunks - 1) / n_chunks;
  std::vector<MarginalAccumulator> parts(n_chunks, MarginalAccumulator(L));

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    accumulate_range(o, begin, end, parts[static_cast<size_t>(c)]);
  }

  MarginalAccumulator acc(L);
  for (const auto& p : parts) acc.merge(p);
  return finalize(o, std::move(acc));
}

ExactMarginals exact_marginals_serial(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= kChoiEnumMaxSites, "exact_marginals_serial: L <= 8");
  const std::uint64_t n = 1ULL << (2 * L);
  const std::uint64_t n_chunks = std::min<std::uint64_t>(n, 256);
  const std::uint64_t chunk = (n + n_chunks - 1) / n_chunks;
  MarginalAccumulator acc(L);
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    MarginalAccumulator part(L);
    accumulate_range(o, c * chunk, std::min(n, (c + 1) * chunk), part);
    acc.merge(part);
  }
  return finalize(o, std::move(acc));
}

double operator_magic(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= kChoiEnumMaxSites, "operator_magic: L <= 8");
  const std::uint64_t n = 1ULL << (2 * L);
  const std::uint64_t n_chunks = std::min<std::uint64_t>(n, 256);
  const std::uint64_t chunk = (n + n_chunks - 1) / n_chunks;
  std::vector<double> sum2(n_chunks, 0.0), sum4(n_chunks, 0.0);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(n_chunks); ++c) {
    const std::uint64_t begin = static_cast<std::uint64_t>(c) * chunk;
    const std::uint64_t end = std::min(n, begin + chunk);
    double s2 = 0.0, s4 = 0.0;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      const double w = std::norm(amplitude(o, pauli_string_of_index(idx, L)));
      s2 += w;
      s4 += w * w;
    }
    sum2[static_cast<size_t>(c)] = s2;
    sum4[static_cast<size_t>(c)] = s4;
  }
  double s2 = 0.0, s4 = 0.0;
  for (std::uint64_t c = 0; c < n_chunks; ++c) {
    s2 += sum2[c];
    s4 += sum4[c];
  }
  require(s2 > 0.0, "operator_magic: zero operator");
  return -std::log(s4 / (s2 * s2));
}

Eigen::VectorXd partial_purity_dense(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= 12, "partial_purity_dense: L <= 12");
  const double nsq = o.matrix.squaredNorm();
  require(nsq > 0.0, "partial_purity_dense: zero operator");

  Eigen::VectorXd profile(L + 1);
  profile[L] = 1.0;
  Eigen::MatrixXcd reduced = o.matrix;
  for (int l = L - 1; l >= 0; --l) {
    // trace out site l+1 (0-based l), halving each dimension
    const Eigen::Index half = reduced.rows() / 2;
    Eigen::MatrixXcd next(half, half);
    for (Eigen::Index a = 0; a < half; ++a)
      for (Eigen::Index b = 0; b < half; ++b)
        next(a, b) = reduced(2 * a, 2 * b) + reduced(2 * a + 1, 2 * b + 1);
    reduced.swap(next);
    profile[l] =
        reduced.squaredNorm() / (std::pow(2.0, L - l) * nsq);
  }
  return profile;
}

MarginalDistribution length_marginal_dense(const DenseOperator& o) {
  const Eigen::VectorXd s2 = partial_purity_dense(o);
  const int L = o.num_sites;
  Eigen::VectorXd p(L + 1);
  p[0] = s2[0];
  for (int l = 1; l <= L; ++l) p[l] = s2[l] - s2[l - 1];
  return make_marginal(MarginalKind::Length, std::move(p), L,
                       "length_marginal_dense");
}

double mean_mass_dense(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= 12, "mean_mass_dense: L <= 12");
  const double nsq = o.matrix.squaredNorm();
  require(nsq > 0.0, "mean_mass_dense: zero operator");

  double identity_weight = 0.0;
  const Eigen::Index dim = o.matrix.rows();
  for (int j = 0; j < L; ++j) {
    // Tr_j O: contract the two basis values of site j
    const Eigen::Index outer = Eigen::Index(1) << j;          // sites before j
    const Eigen::Index inner = dim >> (j + 1);                // sites after j
    Eigen::MatrixXcd traced = Eigen::MatrixXcd::Zero(dim / 2, dim / 2);
    for (Eigen::Index ao = 0; ao < outer; ++ao)
      for (Eigen::Index bo = 0; bo < outer; ++bo)
        for (int s = 0; s < 2; ++s)
          traced.block(ao * inner, bo * inner, inner, inner) +=
              o.matrix.block((ao * 2 + s) * inner, (bo * 2 + s) * inner,
                             inner, inner);
    identity_weight += traced.squaredNorm() / (2.0 * nsq);
  }
  return static_cast<double>(L) - identity_weight;
}

Eigen::VectorXd operator_entanglement_renyi2(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= kChoiEnumMaxSites, "operator_entanglement_renyi2: L <= 8");
  DenseOperator normalized = o;
  const double n = std::sqrt(o.matrix.squaredNorm());
  require(n > 0.0, "operator_entanglement_renyi2: zero operator");
  normalized.matrix /= n;
  const ChoiVector v = dense_to_choi(normalized);

  Eigen::VectorXd entropies(L - 1);
  for (int l = 1; l <= L - 1; ++l) {
    const Eigen::Index rows = Eigen::Index(1) << (2 * l);
    const Eigen::Index cols = Eigen::Index(1) << (2 * (L - l));
    // site-major index: the leading 2l bits are the left block
    const Eigen::Map<const Eigen::MatrixXd> m(v.amplitudes.data(), cols, rows);
    Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
    double purity = 0.0;
    for (double s : svd.singularValues()) purity += s * s * s * s;
    entropies[l - 1] = -std::log(purity);
  }
  return entropies;
}

}  // namespace opspread::ed
