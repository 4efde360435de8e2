#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "opspread/harness.hpp"
#include "opspread/lbit.hpp"
#include "opspread/rng.hpp"

using namespace opspread;
using namespace opspread::lbit;

TEST_CASE("coupling sampling respects the exponential envelope") {
  LBitParams params{10, 0.7, 1.5};
  const LBitRealization r = sample_couplings(params, 5);
  REQUIRE(r.couplings.size() == 9);
  for (int j = 2; j <= 10; ++j)
    CHECK(std::abs(r.couplings[j - 2]) <=
          1.5 * std::exp(-0.7 * (j - 1)) + 1e-15);
  const LBitRealization r2 = sample_couplings(params, 5);
  CHECK((r.couplings - r2.couplings).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("flip probabilities") {
  LBitParams params{6, 1.0, 1.0};
  const LBitRealization r = sample_couplings(params, 7);
  CHECK(site_flip_probabilities(r, 0.0).cwiseAbs().maxCoeff() == 0.0);

  // single coupling tuned to 2 J t = pi/2
  LBitRealization single;
  single.couplings = Eigen::VectorXd::Zero(1);
  single.couplings[0] = 0.25;
  const double t = std::numbers::pi;  // 2*0.25*pi = pi/2
  const Eigen::VectorXd p = site_flip_probabilities(single, t);
  CHECK(p[0] == doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::VectorXd q = site_flip_probabilities(r, 3.7);
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    CHECK(q[i] >= 0.0);
    CHECK(q[i] <= 1.0);
  }
}

TEST_CASE("closed forms at t = 0 and simple limits") {
  LBitParams params{8, 0.9, 1.0};
  const LBitRealization r = sample_couplings(params, 11);
  CHECK(lbit_mean_length(r, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(lbit_mean_mass(r, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

  // L=2 with a single coupling: h(t) = 1 + sin^2(2 J t)
  LBitRealization two;
  two.couplings = Eigen::VectorXd::Constant(1, 0.3);
  for (double t : {0.4, 1.1, 2.9}) {
    const double s = std::sin(2.0 * 0.3 * t);
    CHECK(lbit_mean_length(two, t) ==
          doctest::Approx(1.0 + s * s).epsilon(1e-12));
    CHECK(lbit_mean_mass(two, t) ==
          doctest::Approx(1.0 + s * s).epsilon(1e-12));
  }

  // all p_j = 1: mass saturates at L
  LBitRealization sat;
  sat.couplings = Eigen::VectorXd::Constant(4, 0.25);
  CHECK(lbit_mean_mass(sat, std::numbers::pi) ==
        doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("closed forms match the pattern enumeration") {
  LBitParams params{6, 0.8, 1.0};
  Rng rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    const LBitRealization r =
        sample_couplings(params, 100 + static_cast<std::uint64_t>(trial));
    const double t = 8.0 * rng.uniform();
    const EnumeratedMarginals em = enumerate_marginals(r, t);
    CHECK(lbit_mean_length(r, t) ==
          doctest::Approx(em.mean_length).epsilon(1e-12));
    CHECK(lbit_mean_mass(r, t) ==
          doctest::Approx(em.mean_mass).epsilon(1e-12));
  }
}

TEST_CASE("parity classes partition the weight exactly") {
  LBitParams params{8, 0.5, 1.0};
  for (std::uint64_t seed : {3ULL, 4ULL}) {
    const LBitRealization r = sample_couplings(params, seed);
    const EnumeratedMarginals em = enumerate_marginals(r, 2.3);
    CHECK(em.even_parity_weight + em.odd_parity_weight ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("bernoulli product structure of the weights") {
  // P(max site = l) factorizes as p_l * prod_{j>l} q_j summed over prefixes
  LBitParams params{6, 0.6, 1.0};
  const LBitRealization r = sample_couplings(params, 17);
  const double t = 1.9;
  const EnumeratedMarginals em = enumerate_marginals(r, t);
  const Eigen::VectorXd p = site_flip_probabilities(r, t);
  double tail = 1.0;
  Eigen::VectorXd expected = Eigen::VectorXd::Zero(7);
  for (Eigen::Index i = p.size() - 1; i >= 0; --i) {
    expected[static_cast<int>(i) + 2] = p[i] * tail;
    tail *= 1.0 - p[i];
  }
  expected[1] = tail;
  CHECK((em.length.probs - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bounds: 1 <= m(t) and h(t) for all t") {
  LBitParams params{12, 0.4, 1.0};
  const LBitRealization r = sample_couplings(params, 23);
  for (double t : {0.0, 0.3, 2.0, 11.0, 300.0}) {
    const double h = lbit_mean_length(r, t);
    const double m = lbit_mean_mass(r, t);
    CHECK(h >= 1.0 - 1e-12);
    CHECK(h <= 12.0 + 1e-12);
    CHECK(m >= 1.0 - 1e-12);
    CHECK(m <= 12.0 + 1e-12);
  }
}

TEST_CASE("disorder-averaged growth is monotone within noise") {
  LBitParams params{32, 0.5, 1.0};
  const std::vector<double> grid = harness::log_time_grid(1.0, 1e4, 8);
  const AveragedCurves curves = averaged_curves(params, 96, 900, grid);
  int violations = 0;
  for (Eigen::Index i = 1; i < curves.mean_length.size(); ++i)
    if (curves.mean_length[i] < curves.mean_length[i - 1] - 0.05) ++violations;
  CHECK(violations <= static_cast<int>(grid.size() / 10));
}

TEST_CASE("slope table values") {
  const std::vector<double> grid = harness::log_time_grid(1.0, 1e7, 24);
  struct Row {
    double kappa, expected, tol;
  };
  for (const Row& row : {Row{1.0, 0.98, 0.05}, Row{0.5, 1.98, 0.10},
                         Row{0.32, 3.15, 0.15}}) {
    LBitParams params{64, row.kappa, 1.0};
    const SlopeFit fit = lbit_growth_slope(params, 192, 4242, grid);
    MESSAGE("kappa=", row.kappa, " slope=", fit.slope, " +- ",
            fit.stderr_slope);
    CHECK(std::abs(fit.slope - row.expected) < row.tol);
  }
}

TEST_CASE("saturating window raises") {
  LBitParams params{4, 0.2, 1.0};  // tiny chain saturates almost immediately
  const std::vector<double> grid = harness::log_time_grid(1.0, 1e6, 12);
  CHECK_THROWS(lbit_growth_slope(params, 8, 7, grid));
}
