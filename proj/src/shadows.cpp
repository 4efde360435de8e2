#include "opspread/shadows.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "opspread/rng.hpp"

namespace opspread::shadows {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

// per-pair Bell vectors |b_mu> = (sigma^mu x I)|Phi+>, index 2 z_s + z_a
Eigen::Matrix4cd bell_basis_columns() {
  Eigen::Matrix4cd b = Eigen::Matrix4cd::Zero();
  const Complex i(0.0, 1.0);
  b.col(0) << kInvSqrt2, 0, 0, kInvSqrt2;    // I  -> |Phi+>
  b.col(1) << 0, kInvSqrt2, kInvSqrt2, 0;    // X  -> |Psi+>
  b.col(2) << 0, i * kInvSqrt2, -i * kInvSqrt2, 0;  // Y -> i|Psi->
  b.col(3) << kInvSqrt2, 0, 0, -kInvSqrt2;   // Z  -> |Phi->
  return b;
}

// rows of the fixed measurement Clifford: outcome 00 <- Phi+, 01 <- Phi-,
// 10 <- Psi+, 11 <- Psi-
Eigen::Matrix4cd bell_measurement_rows() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m.row(0) << kInvSqrt2, 0, 0, kInvSqrt2;
  m.row(1) << kInvSqrt2, 0, 0, -kInvSqrt2;
  m.row(2) << 0, kInvSqrt2, kInvSqrt2, 0;
  m.row(3) << 0, kInvSqrt2, -kInvSqrt2, 0;
  return m;
}

// applies a 4x4 matrix to pair index `pair` of the 4^L vector
void apply_pair_matrix(Eigen::VectorXcd& amps, int num_sites, int pair,
                       const Eigen::Matrix4cd& m) {
  const Eigen::Index stride = Eigen::Index(1)
                              << (2 * (num_sites - 1 - pair));  // faster pairs
  const Eigen::Index dim = amps.size();
  Eigen::Vector4cd in, out;
  for (Eigen::Index base = 0; base < dim; ++base) {
    // visit each group once: skip indices whose pair digit is nonzero
    if ((base / stride) % 4 != 0) continue;
    for (int d = 0; d < 4; ++d) in[d] = amps[base + d * stride];
    out.noalias() = m * in;
    for (int d = 0; d < 4; ++d) amps[base + d * stride] = out[d];
  }
}

constexpr std::int64_t kShotBatch = 8192;

}  // namespace

PauliCode decode_pair_outcome(std::uint8_t outcome) {
  // 00 -> I (Phi+), 01 -> Z (Phi-), 10 -> X (Psi+), 11 -> Y (Psi-)
  static constexpr PauliCode kMap[4] = {PauliCode::I, PauliCode::Z,
                                        PauliCode::X, PauliCode::Y};
  if (outcome > 3) throw std::invalid_argument("decode_pair_outcome: bits");
  return kMap[outcome];
}

ChoiState choi_state_of(const ChoiVector& pauli_amplitudes) {
  const int L = pauli_amplitudes.num_sites;
  if (L < 1 || L > kMaxShadowSites)
    throw std::invalid_argument("choi_state_of: L must be in [1, 6]");
  ChoiState state;
  state.num_sites = L;
  state.amplitudes = pauli_amplitudes.amplitudes.cast<Complex>();
  const Eigen::Matrix4cd b = bell_basis_columns();
  for (int pair = 0; pair < L; ++pair)
    apply_pair_matrix(state.amplitudes, L, pair, b);
  return state;
}

const std::vector<Eigen::Matrix2cd>& single_qubit_cliffords() {
  static const std::vector<Eigen::Matrix2cd> table = [] {
    Eigen::Matrix2cd h, s;
    h << 1, 1, 1, -1;
    h *= kInvSqrt2;
    s << 1, 0, 0, Complex(0, 1);

    auto canonicalize = [](Eigen::Matrix2cd m) {
      // divide out the phase of the first nonzero entry
      for (int idx = 0; idx < 4; ++idx) {
        const Complex e = m(idx / 2, idx % 2);
        if (std::abs(e) > 1e-8) {
          m *= std::conj(e) / std::abs(e);
          break;
        }
      }
      return m;
    };
    auto key_of = [](const Eigen::Matrix2cd& m) {
      std::array<long long, 8> key{};
      for (int idx = 0; idx < 4; ++idx) {
        key[2 * idx] = std::llround(m(idx / 2, idx % 2).real() * 1e9);
        key[2 * idx + 1] = std::llround(m(idx / 2, idx % 2).imag() * 1e9);
      }
      return key;
    };

    std::vector<Eigen::Matrix2cd> found{
        canonicalize(Eigen::Matrix2cd::Identity())};
    std::vector<std::array<long long, 8>> keys{key_of(found[0])};
    // breadth-first closure under right-multiplication by H and S
    for (size_t head = 0; head < found.size(); ++head) {
      for (const Eigen::Matrix2cd& gen : {h, s}) {
        const Eigen::Matrix2cd cand = canonicalize(found[head] * gen);
        const auto key = key_of(cand);
        if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
          keys.push_back(key);
          found.push_back(cand);
        }
      }
    }
    if (found.size() != 24)
      throw std::logic_error("single_qubit_cliffords: closure size != 24");
    return found;
  }();
  return table;
}

ChoiState apply_random_pair_cliffords(const ChoiState& state,
                                      std::uint64_t seed) {
  const auto& cliffords = single_qubit_cliffords();
  Rng rng(seed);
  ChoiState out = state;
  for (int pair = 0; pair < state.num_sites; ++pair) {
    const Eigen::Matrix2cd& r =
        cliffords[static_cast<size_t>(rng.bounded(cliffords.size()))];
    Eigen::Matrix4cd pair_gate;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        pair_gate.block<2, 2>(2 * i, 2 * j) = r(i, j) * r.conjugate();
    apply_pair_matrix(out.amplitudes, out.num_sites, pair, pair_gate);
  }
  return out;
}

std::vector<ShadowSnapshot> bell_sample(const ChoiState& state,
                                        std::int64_t n_shots,
                                        std::uint64_t seed) {
  if (n_shots < 1) throw std::invalid_argument("bell_sample: n_shots >= 1");
  const int L = state.num_sites;

  ChoiState rotated = state;
  const Eigen::Matrix4cd meas = bell_measurement_rows();
  for (int pair = 0; pair < L; ++pair)
    apply_pair_matrix(rotated.amplitudes, L, pair, meas);

  const Eigen::Index dim = rotated.amplitudes.size();
  std::vector<double> cdf(static_cast<size_t>(dim));
  double run = 0.0;
  for (Eigen::Index i = 0; i < dim; ++i) {
    run += std::norm(rotated.amplitudes[i]);
    cdf[static_cast<size_t>(i)] = run;
  }
  if (run <= 0.0) throw std::runtime_error("bell_sample: zero-norm state");
  const double total = run;

  std::vector<ShadowSnapshot> shots(static_cast<size_t>(n_shots));
  const std::int64_t n_batches = (n_shots + kShotBatch - 1) / kShotBatch;

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t b = 0; b < n_batches; ++b) {
    Rng rng(Rng::substream_seed(seed, static_cast<std::uint64_t>(b)));
    const std::int64_t begin = b * kShotBatch;
    const std::int64_t end = std::min(n_shots, begin + kShotBatch);
    for (std::int64_t k = begin; k < end; ++k) {
      const double u = rng.uniform() * total;
      const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      const auto outcome = static_cast<std::uint64_t>(
          std::min<std::ptrdiff_t>(it - cdf.begin(), dim - 1));
      ShadowSnapshot snap;
      snap.pair_outcomes.resize(static_cast<size_t>(L));
      std::vector<PauliCode> codes(static_cast<size_t>(L));
      for (int pair = 0; pair < L; ++pair) {
        const auto bits = static_cast<std::uint8_t>(
            (outcome >> (2 * (L - 1 - pair))) & 3ULL);
        snap.pair_outcomes[static_cast<size_t>(pair)] = bits;
        codes[static_cast<size_t>(pair)] = decode_pair_outcome(bits);
      }
      snap.decoded = PauliString(std::move(codes));
      shots[static_cast<size_t>(k)] = std::move(snap);
    }
  }
  return shots;
}

MarginalEstimate estimate_marginals(const std::vector<ShadowSnapshot>& shots) {
  if (shots.empty())
    throw std::invalid_argument("estimate_marginals: no snapshots");
  const int L = shots.front().decoded.num_sites();
  Eigen::VectorXd length_hist = Eigen::VectorXd::Zero(L + 1);
  Eigen::VectorXd mass_hist = Eigen::VectorXd::Zero(L + 1);
  for (const ShadowSnapshot& s : shots) {
    length_hist[string_length(s.decoded)] += 1.0;
    mass_hist[string_mass(s.decoded)] += 1.0;
  }
  const auto n = static_cast<double>(shots.size());
  MarginalEstimate est;
  est.length =
      make_marginal(MarginalKind::Length, length_hist / n, L, "shadow estimate");
  est.mass =
      make_marginal(MarginalKind::Mass, mass_hist / n, L, "shadow estimate");
  est.n_shots = static_cast<std::int64_t>(shots.size());
  est.length_stderr.resize(L + 1);
  est.mass_stderr.resize(L + 1);
  for (int i = 0; i <= L; ++i) {
    est.length_stderr[i] =
        std::sqrt(est.length.probs[i] * (1.0 - est.length.probs[i]) / n);
    est.mass_stderr[i] =
        std::sqrt(est.mass.probs[i] * (1.0 - est.mass.probs[i]) / n);
  }
  return est;
}

ExactMarginalsFromState exact_outcome_marginals(const ChoiState& state) {
  const int L = state.num_sites;
  ChoiState rotated = state;
  const Eigen::Matrix4cd meas = bell_measurement_rows();
  for (int pair = 0; pair < L; ++pair)
    apply_pair_matrix(rotated.amplitudes, L, pair, meas);

  Eigen::VectorXd length_hist = Eigen::VectorXd::Zero(L + 1);
  Eigen::VectorXd mass_hist = Eigen::VectorXd::Zero(L + 1);
  for (Eigen::Index idx = 0; idx < rotated.amplitudes.size(); ++idx) {
    const double w = std::norm(rotated.amplitudes[idx]);
    int h = 0, m = 0;
    for (int pair = 0; pair < L; ++pair) {
      const auto bits = static_cast<std::uint8_t>(
          (static_cast<std::uint64_t>(idx) >> (2 * (L - 1 - pair))) & 3ULL);
      if (decode_pair_outcome(bits) != PauliCode::I) {
        h = pair + 1;
        ++m;
      }
    }
    length_hist[h] += w;
    mass_hist[m] += w;
  }
  ExactMarginalsFromState out;
  out.length = make_marginal(MarginalKind::Length, std::move(length_hist), L,
                             "exact_outcome_marginals");
  out.mass = make_marginal(MarginalKind::Mass, std::move(mass_hist), L,
                           "exact_outcome_marginals");
  return out;
}

}  // namespace opspread::shadows
