#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "opspread/lbit.hpp"
#include "opspread/shadows.hpp"
#include "opspread/xxz.hpp"

namespace opspread::harness {

inline constexpr const char* kVersion = "0.1.0";

enum class Mode { Evolve, Ed, Lbit, Shadows };

const char* mode_name(Mode m);

struct ExperimentConfig {
  Mode mode = Mode::Evolve;

  // model
  int num_sites = 12;
  double delta = 1.0;
  double disorder = 6.5;        // XXZ field half-width W
  double kappa = 1.0;           // lbit decay rate
  double coupling_width = 1.0;  // lbit W

  // ensemble
  int n_realizations = 1;
  std::uint64_t base_seed = 12345;

  // evolution
  double dt = 0.05;
  double t_max = 100.0;
  int trotter_order = 2;
  double cutoff = kDefaultCutoff;
  int chi_max = kDefaultChiMax;
  double fail_threshold = 1e-4;
  bool abort_on_budget = true;

  // sample grid: "log" (points per decade, boundary-aligned, plus t = 0)
  // or "linear" (n points on [0, t_max] including both ends)
  std::string grid = "log";
  int points_per_decade = 48;
  double t_min = 0.1;
  int linear_samples = 65;

  // shadows
  double shadow_time = 1.0;
  std::int64_t n_shots = 100000;

  // output
  std::string out_dir = "run_out";
  bool emit_distributions = false;
  bool keep_raw = false;
  int threads = 0;  // 0 keeps the OpenMP default

  std::vector<double> sample_times() const;
  void validate() const;
};

struct AveragedSeries {
  std::vector<double> times;
  Eigen::VectorXd h_mean, h_stderr;
  Eigen::VectorXd m_mean, m_stderr;
  Eigen::VectorXd e2_mean, e2_stderr;
  Eigen::VectorXd chi_mean;
  Eigen::VectorXd discarded_mean;
  int n_realizations = 0;
  int n_aborted = 0;
};

/// Log-spaced grid aligned to decade boundaries (t = 10^(k + i/per_decade)),
/// clipped to [t_min, t_max], with t_min and t_max always included.
std::vector<double> log_time_grid(double t_min, double t_max, int per_decade);

/// n points on [0, t_max], both ends included.
std::vector<double> linear_time_grid(double t_max, int n_points);

/// Runs the configured ensemble: realization r uses seed base_seed + r,
/// results are reduced in realization order, and series.csv, manifest.txt
/// and optional raw/distribution files are written under out_dir. Raises
/// when more than 5% of realizations abort.
AveragedSeries run_experiment(const ExperimentConfig& cfg);

/// Trapezoidal time-window average (1/L) * integral_0^L of the series.
/// The grid must cover [0, L].
double window_average(const std::vector<double>& times,
                      const Eigen::VectorXd& values, double window_length);

/// Elementwise value / ln(L) over a set of system sizes.
Eigen::VectorXd rescale_by_log_length(const Eigen::VectorXd& values,
                                      const std::vector<int>& sizes);

struct SeriesTable {
  std::vector<double> times;
  Eigen::VectorXd h_mean, h_stderr, m_mean, m_stderr, e2_mean, e2_stderr,
      chi_mean, discarded_mean;
};
/// Reads back a series.csv written by run_experiment.
SeriesTable read_series_csv(const std::string& path);

struct LinearFit {
  double slope = 0.0;
  double stderr_slope = 0.0;
  double intercept = 0.0;
  int n_points = 0;
};
/// Least squares of y against ln t restricted to t in [t_lo, t_hi].
LinearFit fit_vs_log_time(const std::vector<double>& times,
                          const Eigen::VectorXd& values, double t_lo,
                          double t_hi);

}  // namespace opspread::harness
