// opspread: operator-spreading simulator for disordered spin chains.
//
// Subcommands: evolve, ed, lbit, shadows, window-avg, slope-fit.
// Every run writes series/manifest files under --out; config files use
// flat key=value lines and command-line flags override them.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "opspread/harness.hpp"
#include "opspread/lbit.hpp"

namespace {

using opspread::harness::ExperimentConfig;
using opspread::harness::Mode;

void add_common_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->set_config("--config", "", "flat key=value config file");
  cmd->add_option("-L,--sites", cfg.num_sites, "chain length");
  cmd->add_option("-n,--realizations", cfg.n_realizations,
                  "number of disorder realizations");
  cmd->add_option("-s,--seed", cfg.base_seed,
                  "base seed; realization r uses base_seed + r");
  cmd->add_option("--grid", cfg.grid, "sample grid: log or linear");
  cmd->add_option("--points-per-decade", cfg.points_per_decade,
                  "log-grid density");
  cmd->add_option("--t-min", cfg.t_min, "first log-grid time");
  cmd->add_option("--linear-samples", cfg.linear_samples,
                  "points of the linear grid");
  cmd->add_option("--t-max", cfg.t_max, "final time");
  cmd->add_option("-o,--out", cfg.out_dir, "output directory");
  cmd->add_flag("--emit-distributions", cfg.emit_distributions,
                "write per-time length/mass distribution files");
  cmd->add_flag("--raw", cfg.keep_raw, "keep per-realization raw series");
  cmd->add_option("--threads", cfg.threads, "worker threads (0 = default)");
}

void add_xxz_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("-D,--delta", cfg.delta, "interaction strength");
  cmd->add_option("-W,--disorder", cfg.disorder, "field half-width");
}

void add_evolution_options(CLI::App* cmd, ExperimentConfig& cfg) {
  cmd->add_option("--dt", cfg.dt, "Trotter step");
  cmd->add_option("--trotter-order", cfg.trotter_order, "1 or 2");
  cmd->add_option("--cutoff", cfg.cutoff, "relative discarded-weight cutoff");
  cmd->add_option("--chi-max", cfg.chi_max, "bond dimension cap");
  cmd->add_option("--fail-threshold", cfg.fail_threshold,
                  "cumulative discarded-weight budget");
  cmd->add_flag("--no-abort-on-budget{false}", cfg.abort_on_budget,
                "record budget exhaustion instead of aborting");
}

int run_and_report(const ExperimentConfig& cfg) {
  const opspread::harness::AveragedSeries s =
      opspread::harness::run_experiment(cfg);
  std::printf("wrote %s (%zu sample times, %d realizations", cfg.out_dir.c_str(),
              s.times.size(), s.n_realizations);
  if (s.n_aborted > 0) std::printf(", %d aborted", s.n_aborted);
  std::printf(")\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"operator spreading in disordered spin chains"};
  app.require_subcommand(1);

  ExperimentConfig cfg;

  auto* evolve = app.add_subcommand(
      "evolve", "MPS Heisenberg evolution of the edge operator");
  add_common_options(evolve, cfg);
  add_xxz_options(evolve, cfg);
  add_evolution_options(evolve, cfg);

  auto* ed = app.add_subcommand(
      "ed", "exact-diagonalization evolution (L <= 12)");
  add_common_options(ed, cfg);
  add_xxz_options(ed, cfg);

  auto* lbit = app.add_subcommand("lbit", "analytic l-bit model curves");
  add_common_options(lbit, cfg);
  lbit->add_option("-k,--kappa", cfg.kappa, "coupling decay rate");
  lbit->add_option("-W,--coupling-width", cfg.coupling_width,
                   "coupling half-width");

  auto* shadows = app.add_subcommand(
      "shadows", "Bell-measurement shadow protocol at desk scale (L <= 6)");
  add_common_options(shadows, cfg);
  add_xxz_options(shadows, cfg);
  shadows->add_option("-t,--time", cfg.shadow_time,
                      "evolution time of the measured operator");
  shadows->add_option("-N,--shots", cfg.n_shots, "number of shots");

  // window-avg
  std::string series_path;
  double window_length = 0.0;
  auto* window = app.add_subcommand(
      "window-avg", "time-window average (1/L) int_0^L of a series");
  window->add_option("--series", series_path, "series.csv path")->required();
  window->add_option("-L,--window", window_length,
                     "window length (the system size)")
      ->required();

  // slope-fit
  struct SlopeArgs {
    std::vector<double> kappas{1.0, 0.5, 0.32};
    int sites = 64;
    double coupling_width = 1.0;
    int realizations = 192;
    std::uint64_t seed = 4242;
    double t_min = 1.0, t_max = 1e7;
    int per_decade = 24;
    double fit_t_min = 10.0;
    std::string series;
    double series_t_lo = 10.0, series_t_hi = 200.0;
  } slope_args;
  auto* slope = app.add_subcommand(
      "slope-fit", "log-time growth slopes (l-bit table, or a series fit)");
  slope->add_option("-k,--kappa", slope_args.kappas, "decay rates to fit");
  slope->add_option("-L,--sites", slope_args.sites, "chain length");
  slope->add_option("-W,--coupling-width", slope_args.coupling_width,
                    "coupling half-width");
  slope->add_option("-n,--realizations", slope_args.realizations,
                    "disorder realizations");
  slope->add_option("-s,--seed", slope_args.seed, "base seed");
  slope->add_option("--t-min", slope_args.t_min, "grid start");
  slope->add_option("--t-max", slope_args.t_max, "grid end");
  slope->add_option("--points-per-decade", slope_args.per_decade,
                    "grid density");
  slope->add_option("--fit-t-min", slope_args.fit_t_min,
                    "lower edge of the fit window");
  slope->add_option("--series", slope_args.series,
                    "fit an existing series.csv instead of the l-bit model");
  slope->add_option("--fit-window-lo", slope_args.series_t_lo,
                    "series fit: window start");
  slope->add_option("--fit-window-hi", slope_args.series_t_hi,
                    "series fit: window end");

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) {
      cfg.mode = Mode::Evolve;
      return run_and_report(cfg);
    }
    if (ed->parsed()) {
      cfg.mode = Mode::Ed;
      return run_and_report(cfg);
    }
    if (lbit->parsed()) {
      cfg.mode = Mode::Lbit;
      return run_and_report(cfg);
    }
    if (shadows->parsed()) {
      cfg.mode = Mode::Shadows;
      return run_and_report(cfg);
    }
    if (window->parsed()) {
      const auto table = opspread::harness::read_series_csv(series_path);
      const double h_avg = opspread::harness::window_average(
          table.times, table.h_mean, window_length);
      const double m_avg = opspread::harness::window_average(
          table.times, table.m_mean, window_length);
      const double log_l = std::log(window_length);
      std::printf("L,h_window,m_window,h_window_over_lnL,m_window_over_lnL\n");
      std::printf("%.17g,%.17g,%.17g,%.17g,%.17g\n", window_length, h_avg,
                  m_avg, h_avg / log_l, m_avg / log_l);
      return 0;
    }
    if (slope->parsed()) {
      if (!slope_args.series.empty()) {
        const auto table =
            opspread::harness::read_series_csv(slope_args.series);
        const auto fit = opspread::harness::fit_vs_log_time(
            table.times, table.h_mean, slope_args.series_t_lo,
            slope_args.series_t_hi);
        std::printf("slope,stderr,n_points\n%.17g,%.17g,%d\n", fit.slope,
                    fit.stderr_slope, fit.n_points);
        return 0;
      }
      const std::vector<double> grid = opspread::harness::log_time_grid(
          slope_args.t_min, slope_args.t_max, slope_args.per_decade);
      std::printf("kappa,slope,stderr,n_realizations\n");
      for (double kappa : slope_args.kappas) {
        opspread::lbit::LBitParams params{slope_args.sites, kappa,
                                          slope_args.coupling_width};
        const opspread::lbit::SlopeFit fit = opspread::lbit::lbit_growth_slope(
            params, slope_args.realizations, slope_args.seed, grid,
            slope_args.fit_t_min);
        std::printf("%.17g,%.17g,%.17g,%d\n", kappa, fit.slope,
                    fit.stderr_slope, slope_args.realizations);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
