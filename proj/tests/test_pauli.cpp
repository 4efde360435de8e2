#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <complex>

#include "opspread/pauli.hpp"
#include "opspread/rng.hpp"

using namespace opspread;

namespace {

// deterministic random Hermitian operator
DenseOperator random_hermitian(int L, std::uint64_t seed) {
  Rng rng(seed);
  const Eigen::Index dim = Eigen::Index(1) << L;
  Eigen::MatrixXcd m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      m(i, j) = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
  Eigen::MatrixXcd herm = (m + m.adjoint()) / 2.0;
  return DenseOperator(std::move(herm), L, /*herm=*/true);
}

PauliString str_of(std::initializer_list<PauliCode> codes) {
  return PauliString(std::vector<PauliCode>(codes));
}

constexpr auto I = PauliCode::I;
constexpr auto X = PauliCode::X;
constexpr auto Y = PauliCode::Y;
constexpr auto Z = PauliCode::Z;

}  // namespace

TEST_CASE("pauli matrices") {
  CHECK(pauli_matrix(I).isApprox(Eigen::Matrix2cd::Identity()));
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  CHECK(pauli_matrix(Z).isApprox(z));
  Eigen::Matrix2cd y;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  CHECK(pauli_matrix(Y).isApprox(y));
}

TEST_CASE("normalized pauli basis is orthonormal on one site") {
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      const Complex tr = (normalized_pauli_matrix(static_cast<PauliCode>(mu)) *
                          normalized_pauli_matrix(static_cast<PauliCode>(nu)))
                             .trace();
      const double expected = (mu == nu) ? 1.0 : 0.0;
      CHECK(std::abs(tr - expected) < 1e-12);
    }
  }
}

TEST_CASE("string mass and length") {
  CHECK(string_mass(str_of({I, I, I, I})) == 0);
  CHECK(string_mass(str_of({Z, I, X, I})) == 2);
  CHECK(string_mass(str_of({X, Y, Z})) == 3);

  CHECK(string_length(str_of({I, I, I})) == 0);
  CHECK(string_length(str_of({Z, I, I, I})) == 1);
  CHECK(string_length(str_of({I, X, I, Z, I})) == 4);
}

TEST_CASE("mass/length bounds and coupling") {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int L = 1 + static_cast<int>(rng.bounded(6));
    std::vector<PauliCode> codes;
    for (int j = 0; j < L; ++j)
      codes.push_back(static_cast<PauliCode>(rng.bounded(4)));
    const PauliString q(codes);
    const int m = string_mass(q), h = string_length(q);
    CHECK(m >= 0);
    CHECK(m <= L);
    CHECK(h >= 0);
    CHECK(h <= L);
    CHECK(((m >= 1) == (h >= 1)));
    CHECK(m <= h);  // every non-identity site lies at or left of h
  }
}

TEST_CASE("pauli index round trip is site-major") {
  // (Z, I) -> 3 * 4 + 0 with site 1 the most significant digit
  CHECK(pauli_index(str_of({Z, I})) == 12);
  CHECK(pauli_index(str_of({I, X})) == 1);
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int L = 1 + static_cast<int>(rng.bounded(8));
    const std::uint64_t idx = rng.bounded(1ULL << (2 * L));
    CHECK(pauli_index(pauli_string_of_index(idx, L)) == idx);
  }
}

TEST_CASE("amplitude on basis operators") {
  // O = sigma^z_1 x I on L=2
  DenseOperator o(pauli_string_matrix(str_of({Z, I})), 2, true);
  CHECK(std::abs(amplitude(o, str_of({Z, I})) - 4.0) < 1e-12);
  CHECK(std::abs(amplitude(o, str_of({X, I}))) < 1e-12);
}

TEST_CASE("amplitude matches the dense trace for random operators") {
  const int L = 3;
  const DenseOperator o = random_hermitian(L, 42);
  for (std::uint64_t idx = 0; idx < (1ULL << (2 * L)); ++idx) {
    const PauliString q = pauli_string_of_index(idx, L);
    const Complex direct = (pauli_string_matrix(q) * o.matrix).trace();
    const Complex fast = amplitude(o, q);
    CHECK(std::abs(direct - fast) < 1e-10);
  }
}

TEST_CASE("pauli strings are orthonormal at L <= 3") {
  for (int L = 1; L <= 3; ++L) {
    const std::uint64_t n = 1ULL << (2 * L);
    const double scale = std::pow(2.0, -0.5 * L);
    for (std::uint64_t a = 0; a < n; ++a) {
      const Eigen::MatrixXcd pa =
          pauli_string_matrix(pauli_string_of_index(a, L)) * scale;
      for (std::uint64_t b = 0; b < n; ++b) {
        const Eigen::MatrixXcd pb =
            pauli_string_matrix(pauli_string_of_index(b, L)) * scale;
        const double expected = (a == b) ? 1.0 : 0.0;
        CHECK(std::abs((pa * pb).trace() - expected) < 1e-12);
      }
    }
  }
}

TEST_CASE("dense_to_choi basics") {
  // sigma^z_1 x I at L=2: amplitude 2^{L/2} = 2 on (Z, I)
  DenseOperator o(pauli_string_matrix(str_of({Z, I})), 2, true);
  const ChoiVector v = dense_to_choi(o);
  for (std::uint64_t idx = 0; idx < 16; ++idx) {
    const double expected = (idx == pauli_index(str_of({Z, I}))) ? 2.0 : 0.0;
    CHECK(std::abs(v.amplitudes[static_cast<Eigen::Index>(idx)] - expected) <
          1e-12);
  }

  DenseOperator zero(Eigen::MatrixXcd::Zero(4, 4), 2, true);
  CHECK(dense_to_choi(zero).amplitudes.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("choi round trip and Parseval at L = 3") {
  const int L = 3;
  const DenseOperator o = random_hermitian(L, 1234);
  const ChoiVector v = dense_to_choi(o);

  // Parseval: sum A^2 = Tr[O^dag O]
  const double lhs = v.norm_squared();
  const double rhs = (o.matrix.adjoint() * o.matrix).trace().real();
  CHECK(std::abs(lhs - rhs) < 1e-10);

  const DenseOperator back = choi_to_dense(v);
  CHECK((back.matrix - o.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("choi_to_dense basis element") {
  // unit vector on (Z, I) reconstructs the normalized string
  ChoiVector v;
  v.num_sites = 2;
  v.amplitudes = Eigen::VectorXd::Zero(16);
  v.amplitudes[static_cast<Eigen::Index>(pauli_index(str_of({Z, I})))] = 1.0;
  const DenseOperator d = choi_to_dense(v);
  const Eigen::MatrixXcd expected = pauli_string_matrix(str_of({Z, I})) / 2.0;
  CHECK((d.matrix - expected).cwiseAbs().maxCoeff() < 1e-12);

  ChoiVector zero;
  zero.num_sites = 2;
  zero.amplitudes = Eigen::VectorXd::Zero(16);
  CHECK(choi_to_dense(zero).matrix.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hermitian operators have real amplitudes") {
  const DenseOperator o = random_hermitian(3, 99);
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const Complex a = amplitude(o, pauli_string_of_index(idx, 3));
    CHECK(std::abs(a.imag()) < 1e-12);
  }
}
