// Kernel benchmark: wall-clock comparison of the serial reference paths
// against the OpenMP parallel ones on representative workloads.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include "opspread/ed.hpp"
#include "opspread/harness.hpp"
#include "opspread/lbit.hpp"
#include "opspread/marginals.hpp"
#include "opspread/rng.hpp"
#include "opspread/shadows.hpp"

using namespace opspread;
namespace chrono = std::chrono;

namespace {

double time_once(const std::function<void()>& fn) {
  const auto t0 = chrono::steady_clock::now();
  fn();
  return chrono::duration<double>(chrono::steady_clock::now() - t0).count();
}

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) best = std::min(best, time_once(fn));
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-34s %10.3f ms %10.3f ms %7.2fx\n", name, serial * 1e3,
              parallel * 1e3, serial / parallel);
}

PauliString edge_z(int L) {
  std::vector<PauliCode> codes(static_cast<size_t>(L), PauliCode::I);
  codes[0] = PauliCode::Z;
  return PauliString(codes);
}

}  // namespace

int main() {
  const int threads = omp_get_max_threads();
  std::printf("threads available: %d\n", threads);
  std::printf("%-34s %13s %13s %8s\n", "kernel", "serial", "parallel",
              "speedup");

  // 4^L amplitude enumeration (exact marginals of a dense operator)
  {
    XXZParams params{7, 1.0, 1.0, 4.0};
    const DisorderRealization r = sample_disorder(params, 1);
    const DenseOperator h = ed::dense_hamiltonian(params, r);
    const DenseOperator o0(pauli_string_matrix(edge_z(7)), 7, true);
    const DenseOperator ot = ed::evolve_exact(o0, h, 3.0);
    const double serial =
        best_of(3, [&] { (void)ed::exact_marginals_serial(ot); });
    const double parallel = best_of(3, [&] { (void)ed::exact_marginals(ot); });
    report("ed amplitude enumeration (L=7)", serial, parallel);
  }

  // mass distribution: L+1 independent generating-function sweeps
  {
    XXZParams params{16, 1.0, 1.0, 3.0};
    const DisorderRealization r = sample_disorder(params, 2);
    EvolutionConfig cfg;
    cfg.dt = 0.05;
    cfg.t_max = 10.0;
    cfg.cutoff = 1e-10;
    cfg.chi_max = 64;
    cfg.sample_times = {10.0};
    OperatorMPS state = OperatorMPS::product_operator(edge_z(16));
    evolve(state, params, r, cfg);
    state.canonicalize(CanonicalForm::Left);
    omp_set_num_threads(1);
    const double serial = best_of(3, [&] { (void)mass_distribution(state); });
    omp_set_num_threads(threads);
    const double parallel =
        best_of(3, [&] { (void)mass_distribution(state); });
    report("mass distribution (L=16)", serial, parallel);
  }

  // l-bit disorder sweep
  {
    lbit::LBitParams params{64, 0.5, 1.0};
    const std::vector<double> grid = harness::log_time_grid(1.0, 1e7, 24);
    omp_set_num_threads(1);
    const double serial =
        best_of(3, [&] { (void)lbit::averaged_curves(params, 192, 7, grid); });
    omp_set_num_threads(threads);
    const double parallel =
        best_of(3, [&] { (void)lbit::averaged_curves(params, 192, 7, grid); });
    report("l-bit sweep (192 realizations)", serial, parallel);
  }

  // shadow sampling in batches
  {
    Rng rng(3);
    ChoiVector v;
    v.num_sites = 4;
    v.amplitudes.resize(256);
    for (Eigen::Index i = 0; i < 256; ++i)
      v.amplitudes[i] = 2.0 * rng.uniform() - 1.0;
    v.amplitudes.normalize();
    const shadows::ChoiState state = shadows::choi_state_of(v);
    omp_set_num_threads(1);
    const double serial =
        best_of(3, [&] { (void)shadows::bell_sample(state, 2000000, 5); });
    omp_set_num_threads(threads);
    const double parallel =
        best_of(3, [&] { (void)shadows::bell_sample(state, 2000000, 5); });
    report("bell sampling (2e6 shots, L=4)", serial, parallel);
  }

  // disorder-averaged evolution across realizations
  {
    harness::ExperimentConfig cfg;
    cfg.mode = harness::Mode::Evolve;
    cfg.num_sites = 8;
    cfg.delta = 1.0;
    cfg.disorder = 6.5;
    cfg.n_realizations = 8;
    cfg.base_seed = 11;
    cfg.dt = 0.05;
    cfg.t_max = 10.0;
    cfg.grid = "log";
    cfg.t_min = 1.0;
    cfg.points_per_decade = 8;
    cfg.cutoff = 1e-10;
    cfg.chi_max = 64;
    cfg.out_dir = "/tmp/opspread_bench_run";
    cfg.threads = 1;
    const double serial =
        best_of(1, [&] { (void)harness::run_experiment(cfg); });
    cfg.threads = threads;
    const double parallel =
        best_of(1, [&] { (void)harness::run_experiment(cfg); });
    report("evolve ensemble (8 realizations)", serial, parallel);
  }
  return 0;
}
