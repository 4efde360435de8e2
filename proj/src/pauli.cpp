#include "opspread/pauli.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace opspread {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

}  // namespace

int string_mass(const PauliString& q) {
  int m = 0;
  for (PauliCode c : q.codes)
    if (c != PauliCode::I) ++m;
  return m;
}

int string_length(const PauliString& q) {
  for (int j = q.num_sites(); j >= 1; --j)
    if (q.codes[j - 1] != PauliCode::I) return j;
  return 0;
}

std::uint64_t pauli_index(const PauliString& q) {
  std::uint64_t idx = 0;
  for (PauliCode c : q.codes) idx = idx * 4 + static_cast<std::uint64_t>(c);
  return idx;
}

PauliString pauli_string_of_index(std::uint64_t index, int num_sites) {
  std::vector<PauliCode> codes(num_sites);
  for (int j = num_sites - 1; j >= 0; --j) {
    codes[j] = static_cast<PauliCode>(index & 3ULL);
    index >>= 2;
  }
  return PauliString(std::move(codes));
}

char pauli_char(PauliCode c) {
  switch (c) {
    case PauliCode::I: return 'I';
    case PauliCode::X: return 'X';
    case PauliCode::Y: return 'Y';
    case PauliCode::Z: return 'Z';
  }
  return '?';
}

std::string pauli_string_to_text(const PauliString& q) {
  std::string s;
  s.reserve(q.codes.size());
  for (PauliCode c : q.codes) s.push_back(pauli_char(c));
  return s;
}

DenseOperator::DenseOperator(Eigen::MatrixXcd m, int sites, bool herm)
    : matrix(std::move(m)), num_sites(sites), hermitian(herm) {
  const Eigen::Index dim = Eigen::Index(1) << sites;
  require(matrix.rows() == dim && matrix.cols() == dim,
          "DenseOperator: matrix dimension does not match 2^L");
  if (hermitian) {
    const double dev = (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
    require(dev < 1e-12, "DenseOperator: Hermiticity flag violated, deviation " +
                             std::to_string(dev));
  }
}

Eigen::Matrix2cd pauli_matrix(PauliCode code) {
  Eigen::Matrix2cd m;
  const Complex i(0.0, 1.0);
  switch (code) {
    case PauliCode::I: m << 1, 0, 0, 1; break;
    case PauliCode::X: m << 0, 1, 1, 0; break;
    case PauliCode::Y: m << 0, -i, i, 0; break;
    case PauliCode::Z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix2cd normalized_pauli_matrix(PauliCode code) {
  return pauli_matrix(code) / std::sqrt(2.0);
}

Eigen::MatrixXcd pauli_string_matrix(const PauliString& q) {
  const int L = q.num_sites();
  require(L >= 1 && L <= kDenseMaxSites, "pauli_string_matrix: L out of range");
  // site-major: earlier sites are the slow indices, so each new site enters
  // as the fast factor of the Kronecker product
  Eigen::MatrixXcd out = pauli_matrix(q.codes[0]);
  for (int j = 1; j < L; ++j) {
    const Eigen::Matrix2cd p = pauli_matrix(q.codes[j]);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index a = 0; a < out.rows(); ++a)
      for (Eigen::Index b = 0; b < out.cols(); ++b)
        next.block(2 * a, 2 * b, 2, 2) = out(a, b) * p;
    out.swap(next);
  }
  return out;
}

Complex amplitude(const DenseOperator& o, const PauliString& q) {
  const int L = o.num_sites;
  require(q.num_sites() == L, "amplitude: operator/string length mismatch");
  require(L <= kDenseMaxSites, "amplitude: L exceeds dense cap");

  // flip mask and per-site factors: <s_j | sigma^alpha | s_j'> with the unique
  // s_j' = s_j ^ flip_j
  std::uint64_t flip = 0;
  for (int j = 0; j < L; ++j) {
    const PauliCode c = q.codes[j];
    if (c == PauliCode::X || c == PauliCode::Y)
      flip |= 1ULL << (L - 1 - j);  // site 1 = most significant bit
  }

  const std::uint64_t dim = 1ULL << L;
  Complex sum(0.0, 0.0);
  for (std::uint64_t s = 0; s < dim; ++s) {
    const std::uint64_t sp = s ^ flip;
    Complex factor(1.0, 0.0);
    for (int j = 0; j < L; ++j) {
      const int bit = static_cast<int>((s >> (L - 1 - j)) & 1ULL);
      switch (q.codes[j]) {
        case PauliCode::I: break;
        case PauliCode::X: break;  // <s|X|1-s> = 1
        case PauliCode::Y:
          // <0|Y|1> = -i, <1|Y|0> = i
          factor *= Complex(0.0, bit ? 1.0 : -1.0);
          break;
        case PauliCode::Z:
          if (bit) factor = -factor;  // <s|Z|s> = (-1)^s
          break;
      }
    }
    sum += factor * o.matrix(static_cast<Eigen::Index>(sp),
                             static_cast<Eigen::Index>(s));
  }
  return sum;
}

ChoiVector dense_to_choi(const DenseOperator& o) {
  const int L = o.num_sites;
  require(L <= kChoiEnumMaxSites, "dense_to_choi: L exceeds enumeration cap");
  const std::uint64_t n = 1ULL << (2 * L);
  const double scale = std::pow(2.0, -0.5 * L);  // A_mu = calA_Q / 2^{L/2}

  ChoiVector v;
  v.num_sites = L;
  v.amplitudes.resize(static_cast<Eigen::Index>(n));
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const Complex a = amplitude(o, pauli_string_of_index(idx, L)) * scale;
    if (o.hermitian && std::abs(a.imag()) >= 1e-12)
      throw std::runtime_error(
          "dense_to_choi: non-negligible imaginary amplitude for Hermitian "
          "operator");
    v.amplitudes[static_cast<Eigen::Index>(idx)] = a.real();
  }
  return v;
}

DenseOperator choi_to_dense(const ChoiVector& v) {
  const int L = v.num_sites;
  require(L <= kChoiEnumMaxSites, "choi_to_dense: L exceeds enumeration cap");
  const Eigen::Index dim = Eigen::Index(1) << L;
  const std::uint64_t n = 1ULL << (2 * L);
  const double scale = std::pow(2.0, -0.5 * L);  // P_mu = Q_mu / 2^{L/2}

  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    const double a = v.amplitudes[static_cast<Eigen::Index>(idx)];
    if (a == 0.0) continue;
    const PauliString q = pauli_string_of_index(idx, L);

    // same single-configuration structure as amplitude()
    std::uint64_t flip = 0;
    for (int j = 0; j < L; ++j) {
      const PauliCode c = q.codes[j];
      if (c == PauliCode::X || c == PauliCode::Y)
        flip |= 1ULL << (L - 1 - j);
    }
    for (std::uint64_t s = 0; s < (1ULL << L); ++s) {
      const std::uint64_t sp = s ^ flip;
      Complex factor(1.0, 0.0);
      for (int j = 0; j < L; ++j) {
        const int bit = static_cast<int>((s >> (L - 1 - j)) & 1ULL);
        switch (q.codes[j]) {
          case PauliCode::I: break;
          case PauliCode::X: break;
          case PauliCode::Y:
            factor *= Complex(0.0, bit ? -1.0 : 1.0);  // <s'|Y|s>
            break;
          case PauliCode::Z:
            if (bit) factor = -factor;
            break;
        }
      }
      m(static_cast<Eigen::Index>(sp), static_cast<Eigen::Index>(s)) +=
          a * scale * factor;
    }
  }
  return DenseOperator(std::move(m), L, /*herm=*/false);
}

}  // namespace opspread
