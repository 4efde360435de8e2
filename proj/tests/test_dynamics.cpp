#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "opspread/ed.hpp"
#include "opspread/xxz.hpp"
#include "test_support.hpp"

using namespace opspread;

namespace {

constexpr auto I = PauliCode::I;
constexpr auto Z = PauliCode::Z;

PauliString edge_z(int L) {
  std::vector<PauliCode> codes(static_cast<size_t>(L), I);
  codes[0] = Z;
  return PauliString(codes);
}

Eigen::MatrixXcd embed_bond(const Eigen::Matrix4cd& term, int bond, int L) {
  // bond couples 1-based sites (bond, bond+1); site 1 is the slow index
  const Eigen::Index left = Eigen::Index(1) << (bond - 1);
  const Eigen::Index right = Eigen::Index(1) << (L - bond - 1);
  const Eigen::Index dim = Eigen::Index(1) << L;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index a = 0; a < left; ++a)
    for (int p = 0; p < 4; ++p)
      for (int q = 0; q < 4; ++q)
        if (term(p, q) != Complex(0, 0))
          for (Eigen::Index b = 0; b < right; ++b)
            out((a * 4 + p) * right + b, (a * 4 + q) * right + b) +=
                term(p, q);
  return out;
}

}  // namespace

TEST_CASE("disorder sampling") {
  XXZParams params{8, 1.0, 1.0, 0.0};
  const DisorderRealization zero = sample_disorder(params, 5);
  CHECK(zero.fields.cwiseAbs().maxCoeff() == 0.0);

  params.disorder = 6.5;
  const DisorderRealization a = sample_disorder(params, 42);
  const DisorderRealization b = sample_disorder(params, 42);
  CHECK((a.fields - b.fields).cwiseAbs().maxCoeff() == 0.0);

  // statistical sanity on many draws of h_1
  double sum = 0.0, lo = 1e9, hi = -1e9;
  const int n = 100000;
  for (int k = 0; k < n; ++k) {
    const DisorderRealization r =
        sample_disorder(params, 1000 + static_cast<std::uint64_t>(k));
    sum += r.fields[0];
    lo = std::min(lo, r.fields[0]);
    hi = std::max(hi, r.fields[0]);
  }
  CHECK(std::abs(sum / n) < 0.1);
  CHECK(lo >= -6.5);
  CHECK(hi <= 6.5);
}

TEST_CASE("bond hamiltonian structure") {
  XXZParams params{4, 1.0, 0.0, 0.0};
  DisorderRealization r;
  r.fields = Eigen::VectorXd::Zero(4);
  const Eigen::Matrix4cd h = bond_hamiltonian(params, r, 2);
  CHECK(std::abs(h(1, 2) - 0.5) < 1e-15);
  CHECK(std::abs(h(2, 1) - 0.5) < 1e-15);
  CHECK(h.cwiseAbs().sum() == doctest::Approx(1.0));  // only the two flips

  params.delta = 1.0;
  const Eigen::Matrix4cd hzz = bond_hamiltonian(params, r, 2);
  CHECK(std::real(hzz(0, 0)) == doctest::Approx(0.25));
  CHECK(std::real(hzz(1, 1)) == doctest::Approx(-0.25));
  CHECK(std::real(hzz(2, 2)) == doctest::Approx(-0.25));
  CHECK(std::real(hzz(3, 3)) == doctest::Approx(0.25));
}

TEST_CASE("bond terms assemble to the dense Hamiltonian") {
  XXZParams params{5, 1.0, 0.7, 3.0};
  const DisorderRealization r = sample_disorder(params, 7);
  const DenseOperator dense = ed::dense_hamiltonian(params, r);
  Eigen::MatrixXcd assembled =
      Eigen::MatrixXcd::Zero(dense.matrix.rows(), dense.matrix.cols());
  for (int bond = 1; bond <= 4; ++bond)
    assembled += embed_bond(bond_hamiltonian(params, r, bond), bond, 5);
  CHECK((assembled - dense.matrix).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adjoint gate properties") {
  XXZParams params{4, 1.0, 0.8, 2.0};
  const DisorderRealization r = sample_disorder(params, 9);
  const Eigen::Matrix4cd h = bond_hamiltonian(params, r, 2);

  const Eigen::MatrixXd id_gate = adjoint_gate(h, 0.0);
  CHECK((id_gate - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff() <
        1e-12);

  const Eigen::MatrixXd g = adjoint_gate(h, 0.3);
  CHECK((g.transpose() * g - Eigen::MatrixXd::Identity(16, 16))
            .cwiseAbs()
            .maxCoeff() < 1e-10);
  // identity string is conserved
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(16);
  e0[0] = 1.0;
  CHECK((g * e0 - e0).cwiseAbs().maxCoeff() < 1e-12);

  // a commuting operator is left invariant: Delta-only bond, (Z, I) string
  XXZParams ising{2, 0.0, 1.0, 0.0};
  DisorderRealization rz;
  rz.fields = Eigen::VectorXd::Zero(2);
  const Eigen::Matrix4cd hz = bond_hamiltonian(ising, rz, 1);
  const Eigen::MatrixXd gz = adjoint_gate(hz, 0.4);
  Eigen::VectorXd ez = Eigen::VectorXd::Zero(16);
  ez[4 * 3 + 0] = 1.0;  // (Z, I)
  CHECK((gz * ez - ez).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adjoint gate matches the dense conjugation map") {
  XXZParams params{4, 1.0, 0.9, 4.0};
  const DisorderRealization r = sample_disorder(params, 13);
  const Eigen::Matrix4cd h = bond_hamiltonian(params, r, 1);
  const double dt = 0.3;
  const Eigen::MatrixXd g = adjoint_gate(h, dt);

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
  Eigen::Vector4cd phases;
  for (int a = 0; a < 4; ++a)
    phases[a] = std::polar(1.0, es.eigenvalues()[a] * dt);
  const Eigen::Matrix4cd u =
      es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();

  for (int mu = 0; mu < 16; ++mu) {
    const PauliString q = pauli_string_of_index(static_cast<std::uint64_t>(mu), 2);
    const Eigen::MatrixXcd pm =
        pauli_string_matrix(q) / 2.0;  // normalized two-site string
    const Eigen::Matrix4cd conj = u * pm * u.adjoint();
    for (int nu = 0; nu < 16; ++nu) {
      const PauliString qn =
          pauli_string_of_index(static_cast<std::uint64_t>(nu), 2);
      const Complex tr =
          (Eigen::MatrixXcd(pauli_string_matrix(qn) / 2.0) * conj).trace();
      CHECK(std::abs(g(nu, mu) - tr.real()) < 1e-12);
      CHECK(std::abs(tr.imag()) < 1e-12);
    }
  }
}

TEST_CASE("evolution: t = 0 sample is exact") {
  XXZParams params{6, 1.0, 1.0, 6.5};
  const DisorderRealization r = sample_disorder(params, 21);
  EvolutionConfig cfg;
  cfg.dt = 0.02;
  cfg.t_max = 1.0;
  cfg.sample_times = {0.0};
  OperatorMPS state = OperatorMPS::product_operator(edge_z(6));
  const TimeSeries s = evolve(state, params, r, cfg);
  CHECK(s.mean_length[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.mean_mass[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.integrated_renyi2[0] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("identity-string amplitude stays zero for the traceless operator") {
  XXZParams params{6, 1.0, 1.0, 6.5};
  const DisorderRealization r = sample_disorder(params, 23);
  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 2.0;
  cfg.cutoff = 0.0;
  cfg.sample_times = {0.5, 1.0, 2.0};
  cfg.record_distributions = true;
  OperatorMPS state = OperatorMPS::product_operator(edge_z(6));
  const TimeSeries s = evolve(state, params, r, cfg);
  CHECK(s.times.size() == 3);
  for (const auto& dist : s.length_dists) CHECK(dist.probs[0] < 1e-10);
}

TEST_CASE("norm is preserved through untruncated Trotter steps") {
  XXZParams params{5, 1.0, 0.5, 2.0};
  const DisorderRealization r = sample_disorder(params, 29);
  OperatorMPS mps = OperatorMPS::product_operator(edge_z(5));
  for (int bond = 1; bond <= 4; ++bond) {
    const Eigen::MatrixXd g =
        adjoint_gate(bond_hamiltonian(params, r, bond), 0.1);
    mps.apply_two_site_gate(g, bond - 1, 0.0, 1 << 20);
    CHECK(mps.norm_squared() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("determinism: identical config gives identical series") {
  XXZParams params{5, 1.0, 1.0, 6.5};
  const DisorderRealization r = sample_disorder(params, 31);
  EvolutionConfig cfg;
  cfg.dt = 0.05;
  cfg.t_max = 1.0;
  cfg.sample_times = {0.5, 1.0};
  OperatorMPS sa = OperatorMPS::product_operator(edge_z(5));
  OperatorMPS sb = OperatorMPS::product_operator(edge_z(5));
  const TimeSeries a = evolve(sa, params, r, cfg);
  const TimeSeries b = evolve(sb, params, r, cfg);
  for (size_t i = 0; i < a.times.size(); ++i) {
    CHECK(a.mean_length[i] == b.mean_length[i]);
    CHECK(a.mean_mass[i] == b.mean_mass[i]);
    CHECK(a.integrated_renyi2[i] == b.integrated_renyi2[i]);
  }
}

TEST_CASE("short evolution matches the exact oracle") {
  const int L = 5;
  XXZParams params{L, 1.0, 1.0, 6.5};
  const DisorderRealization r = sample_disorder(params, 37);
  EvolutionConfig cfg;
  cfg.dt = 0.00125;  // second-order error ~1e-7 here, below the 1e-6 gate
  cfg.t_max = 1.0;
  cfg.cutoff = 0.0;
  cfg.sample_times = {1.0};
  cfg.record_distributions = true;
  OperatorMPS state = OperatorMPS::product_operator(edge_z(L));
  const TimeSeries s = evolve(state, params, r, cfg);

  const DenseOperator h = ed::dense_hamiltonian(params, r);
  const DenseOperator o0 =
      DenseOperator(pauli_string_matrix(edge_z(L)), L, true);
  const DenseOperator ot = ed::evolve_exact(o0, h, 1.0);
  const ed::ExactMarginals em = ed::exact_marginals(ot);

  CHECK(s.mean_length[0] == doctest::Approx(em.mean_length).epsilon(1e-6));
  CHECK(s.mean_mass[0] == doctest::Approx(em.mean_mass).epsilon(1e-6));
  CHECK(testing::max_abs_diff(s.length_dists[0].probs, em.length.probs) <
        1e-6);
  CHECK(testing::max_abs_diff(s.mass_dists[0].probs, em.mass.probs) < 1e-6);
}

TEST_CASE("trotter error shrinks at second order") {
  const int L = 6;
  XXZParams params{L, 1.0, 1.0, 4.0};
  const DisorderRealization r = sample_disorder(params, 41);
  auto h_at = [&](double dt) {
    EvolutionConfig cfg;
    cfg.dt = dt;
    cfg.t_max = 2.0;
    cfg.cutoff = 0.0;
    cfg.sample_times = {2.0};
    OperatorMPS state = OperatorMPS::product_operator(edge_z(L));
    return evolve(state, params, r, cfg).mean_length[0];
  };
  const double ref = h_at(0.005);
  const double e1 = std::abs(h_at(0.08) - ref);
  const double e2 = std::abs(h_at(0.04) - ref);
  const double e3 = std::abs(h_at(0.02) - ref);
  const double p12 = std::log2(e1 / e2);
  const double p23 = std::log2(e2 / e3);
  MESSAGE("orders: ", p12, " ", p23);
  CHECK(p12 > 1.5);
  CHECK(p12 < 2.5);
  CHECK(p23 > 1.5);
  CHECK(p23 < 2.5);
}
