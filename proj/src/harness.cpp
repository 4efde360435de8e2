#include "opspread/harness.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "opspread/ed.hpp"
#include "opspread/rng.hpp"

namespace opspread::harness {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << content;
  if (!os) throw std::runtime_error("write failed for " + path.string());
}

struct RealizationResult {
  TimeSeries series;
  bool aborted = false;
  std::string error;
};

PauliString edge_z_string(int num_sites) {
  std::vector<PauliCode> codes(static_cast<size_t>(num_sites), PauliCode::I);
  codes[0] = PauliCode::Z;
  return PauliString(std::move(codes));
}

DenseOperator edge_z_dense(int num_sites) {
  return DenseOperator(pauli_string_matrix(edge_z_string(num_sites)),
                       num_sites, /*herm=*/true);
}

TimeSeries run_evolve_realization(const ExperimentConfig& cfg,
                                  const std::vector<double>& times, int r) {
  XXZParams params{cfg.num_sites, 1.0, cfg.delta, cfg.disorder};
  const DisorderRealization realization = sample_disorder(
      params, cfg.base_seed + static_cast<std::uint64_t>(r));
  EvolutionConfig evo;
  evo.dt = cfg.dt;
  evo.t_max = cfg.t_max;
  evo.trotter_order = cfg.trotter_order;
  evo.sample_times = times;
  evo.cutoff = cfg.cutoff;
  evo.chi_max = cfg.chi_max;
  evo.fail_threshold = cfg.fail_threshold;
  evo.abort_on_budget = cfg.abort_on_budget;
  evo.record_distributions = cfg.emit_distributions;
  OperatorMPS state =
      OperatorMPS::product_operator(edge_z_string(cfg.num_sites));
  return evolve(state, params, realization, evo);
}

TimeSeries run_ed_realization(const ExperimentConfig& cfg,
                              const std::vector<double>& times, int r) {
  XXZParams params{cfg.num_sites, 1.0, cfg.delta, cfg.disorder};
  const DisorderRealization realization = sample_disorder(
      params, cfg.base_seed + static_cast<std::uint64_t>(r));
  const DenseOperator h = ed::dense_hamiltonian(params, realization);
  const ed::SpectralDecomposition spec = ed::SpectralDecomposition::of(h);
  const DenseOperator o0 = edge_z_dense(cfg.num_sites);

  const bool enumerable = cfg.num_sites <= kChoiEnumMaxSites;
  TimeSeries series;
  for (double t : times) {
    const DenseOperator ot = ed::evolve_exact(o0, spec, t);
    series.times.push_back(t);
    const MarginalDistribution pl = ed::length_marginal_dense(ot);
    series.mean_length.push_back(pl.mean());
    series.mean_mass.push_back(ed::mean_mass_dense(ot));
    if (enumerable) {
      const Eigen::VectorXd e2 = ed::operator_entanglement_renyi2(ot);
      series.integrated_renyi2.push_back(e2.sum());
      series.renyi2_bonds.push_back(e2);
    } else {
      series.integrated_renyi2.push_back(0.0);
      series.renyi2_bonds.emplace_back(Eigen::VectorXd::Zero(cfg.num_sites - 1));
    }
    series.max_chi.push_back(0);
    series.cumulative_discarded.push_back(0.0);
    if (cfg.emit_distributions && enumerable) {
      const ed::ExactMarginals em = ed::exact_marginals(ot);
      series.length_dists.push_back(em.length);
      series.mass_dists.push_back(em.mass);
    } else if (cfg.emit_distributions) {
      // the mass histogram needs the 4^L enumeration, so only the length
      // marginal is available past L = 8
      series.length_dists.push_back(pl);
    }
  }
  return series;
}

TimeSeries run_lbit_realization(const ExperimentConfig& cfg,
                                const std::vector<double>& times, int r) {
  lbit::LBitParams params{cfg.num_sites, cfg.kappa, cfg.coupling_width};
  const lbit::LBitRealization realization = lbit::sample_couplings(
      params, cfg.base_seed + static_cast<std::uint64_t>(r));
  TimeSeries series;
  for (double t : times) {
    series.times.push_back(t);
    series.mean_length.push_back(lbit::lbit_mean_length(realization, t));
    series.mean_mass.push_back(lbit::lbit_mean_mass(realization, t));
    series.integrated_renyi2.push_back(0.0);
    series.renyi2_bonds.emplace_back(
        Eigen::VectorXd::Zero(std::max(1, cfg.num_sites - 1)));
    series.max_chi.push_back(0);
    series.cumulative_discarded.push_back(0.0);
  }
  return series;
}

std::string series_csv(const AveragedSeries& s) {
  std::ostringstream os;
  os << "t,h_mean,h_stderr,m_mean,m_stderr,e2_mean,e2_stderr,chi_max_mean,"
        "discarded_mean\n";
  for (size_t i = 0; i < s.times.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    os << fmt(s.times[i]) << ',' << fmt(s.h_mean[k]) << ','
       << fmt(s.h_stderr[k]) << ',' << fmt(s.m_mean[k]) << ','
       << fmt(s.m_stderr[k]) << ',' << fmt(s.e2_mean[k]) << ','
       << fmt(s.e2_stderr[k]) << ',' << fmt(s.chi_mean[k]) << ','
       << fmt(s.discarded_mean[k]) << '\n';
  }
  return os.str();
}

std::string manifest_text(const ExperimentConfig& cfg,
                          const std::vector<int>& aborted) {
  std::ostringstream os;
  os << "version = " << kVersion << '\n';
  os << "rng = " << Rng::kName << '\n';
  os << "mode = " << mode_name(cfg.mode) << '\n';
  os << "L = " << cfg.num_sites << '\n';
  os << "J = 1\n";
  os << "delta = " << fmt_short(cfg.delta) << '\n';
  os << "disorder = " << fmt_short(cfg.disorder) << '\n';
  os << "kappa = " << fmt_short(cfg.kappa) << '\n';
  os << "coupling_width = " << fmt_short(cfg.coupling_width) << '\n';
  os << "n_realizations = " << cfg.n_realizations << '\n';
  os << "base_seed = " << cfg.base_seed << '\n';
  os << "dt = " << fmt_short(cfg.dt) << '\n';
  os << "t_max = " << fmt_short(cfg.t_max) << '\n';
  os << "trotter_order = " << cfg.trotter_order << '\n';
  os << "cutoff = " << fmt_short(cfg.cutoff) << '\n';
  os << "chi_max = " << cfg.chi_max << '\n';
  os << "fail_threshold = " << fmt_short(cfg.fail_threshold) << '\n';
  os << "abort_on_budget = " << (cfg.abort_on_budget ? 1 : 0) << '\n';
  os << "grid = " << cfg.grid << '\n';
  os << "points_per_decade = " << cfg.points_per_decade << '\n';
  os << "t_min = " << fmt_short(cfg.t_min) << '\n';
  os << "linear_samples = " << cfg.linear_samples << '\n';
  os << "shadow_time = " << fmt_short(cfg.shadow_time) << '\n';
  os << "n_shots = " << cfg.n_shots << '\n';
  os << "emit_distributions = " << (cfg.emit_distributions ? 1 : 0) << '\n';
  os << "keep_raw = " << (cfg.keep_raw ? 1 : 0) << '\n';
  os << "threads = " << cfg.threads << '\n';
  for (int r = 0; r < cfg.n_realizations; ++r)
    os << "seed_r" << r << " = "
       << cfg.base_seed + static_cast<std::uint64_t>(r) << '\n';
  os << "aborted =";
  for (int r : aborted) os << ' ' << r;
  os << '\n';
  return os.str();
}

std::string distribution_row(double t, const char* kind,
                             const Eigen::VectorXd& probs) {
  std::ostringstream os;
  os << fmt(t) << ',' << kind;
  for (Eigen::Index i = 0; i < probs.size(); ++i) os << ',' << fmt(probs[i]);
  os << '\n';
  return os.str();
}

AveragedSeries run_shadows(const ExperimentConfig& cfg) {
  if (cfg.num_sites > shadows::kMaxShadowSites)
    throw std::invalid_argument("shadows mode: L <= 6");
  XXZParams params{cfg.num_sites, 1.0, cfg.delta, cfg.disorder};
  const DisorderRealization realization =
      sample_disorder(params, cfg.base_seed);
  const DenseOperator h = ed::dense_hamiltonian(params, realization);
  DenseOperator ot = ed::evolve_exact(edge_z_dense(cfg.num_sites), h,
                                      cfg.shadow_time);
  ot.matrix /= std::sqrt(ot.matrix.squaredNorm());
  const ChoiVector choi = dense_to_choi(ot);

  const shadows::ChoiState state = shadows::apply_random_pair_cliffords(
      shadows::choi_state_of(choi), Rng::substream_seed(cfg.base_seed, 0));
  const std::vector<shadows::ShadowSnapshot> shots = shadows::bell_sample(
      state, cfg.n_shots, Rng::substream_seed(cfg.base_seed, 1));
  const shadows::MarginalEstimate est = shadows::estimate_marginals(shots);
  const shadows::ExactMarginalsFromState exact =
      shadows::exact_outcome_marginals(state);

  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  {
    std::ostringstream os;
    os << "shot_index,bitstring,decoded_string,h,m\n";
    for (size_t k = 0; k < shots.size(); ++k) {
      os << k << ',';
      for (std::uint8_t b : shots[k].pair_outcomes)
        os << ((b >> 1) & 1) << (b & 1);
      os << ',' << pauli_string_to_text(shots[k].decoded) << ','
         << string_length(shots[k].decoded) << ','
         << string_mass(shots[k].decoded) << '\n';
    }
    write_file(dir / "snapshots.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "kind,bin,p,stderr\n";
    for (int i = 0; i <= cfg.num_sites; ++i)
      os << "length," << i << ',' << fmt(est.length.probs[i]) << ','
         << fmt(est.length_stderr[i]) << '\n';
    for (int i = 0; i <= cfg.num_sites; ++i)
      os << "mass," << i << ',' << fmt(est.mass.probs[i]) << ','
         << fmt(est.mass_stderr[i]) << '\n';
    write_file(dir / "estimated_marginals.csv", os.str());
  }
  {
    std::ostringstream os;
    os << "kind,bin,p\n";
    for (int i = 0; i <= cfg.num_sites; ++i)
      os << "length," << i << ',' << fmt(exact.length.probs[i]) << '\n';
    for (int i = 0; i <= cfg.num_sites; ++i)
      os << "mass," << i << ',' << fmt(exact.mass.probs[i]) << '\n';
    write_file(dir / "exact_marginals.csv", os.str());
  }
  write_file(dir / "manifest.txt", manifest_text(cfg, {}));

  AveragedSeries out;
  out.times = {cfg.shadow_time};
  out.h_mean = Eigen::VectorXd::Constant(1, est.length.mean());
  out.h_stderr = Eigen::VectorXd::Zero(1);
  out.m_mean = Eigen::VectorXd::Constant(1, est.mass.mean());
  out.m_stderr = Eigen::VectorXd::Zero(1);
  out.e2_mean = Eigen::VectorXd::Zero(1);
  out.e2_stderr = Eigen::VectorXd::Zero(1);
  out.chi_mean = Eigen::VectorXd::Zero(1);
  out.discarded_mean = Eigen::VectorXd::Zero(1);
  out.n_realizations = 1;
  return out;
}

}  // namespace

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Evolve: return "evolve";
    case Mode::Ed: return "ed";
    case Mode::Lbit: return "lbit";
    case Mode::Shadows: return "shadows";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  if (n_realizations < 1)
    throw std::invalid_argument("config: n_realizations >= 1");
  if (grid != "log" && grid != "linear")
    throw std::invalid_argument("config: grid must be log or linear");
  if (t_max <= 0.0) throw std::invalid_argument("config: t_max > 0");
  if (grid == "log" && (t_min <= 0.0 || t_min > t_max))
    throw std::invalid_argument("config: 0 < t_min <= t_max for log grid");
  if (out_dir.empty()) throw std::invalid_argument("config: out_dir empty");
}

std::vector<double> ExperimentConfig::sample_times() const {
  if (grid == "linear") return linear_time_grid(t_max, linear_samples);
  std::vector<double> times = log_time_grid(t_min, t_max, points_per_decade);
  times.insert(times.begin(), 0.0);
  return times;
}

std::vector<double> log_time_grid(double t_min, double t_max,
                                  int per_decade) {
  if (t_min <= 0.0 || t_max < t_min || per_decade < 1)
    throw std::invalid_argument("log_time_grid: bad arguments");
  std::vector<double> grid;
  const double eps = 1e-12;
  const int k0 = static_cast<int>(std::floor(std::log10(t_min)));
  for (int k = k0;; ++k) {
    for (int i = 0; i < per_decade; ++i) {
      const double t = std::pow(10.0, k + static_cast<double>(i) / per_decade);
      if (t < t_min * (1.0 - eps)) continue;
      if (t > t_max * (1.0 + eps)) {
        if (grid.empty() || grid.back() < t_max * (1.0 - eps))
          grid.push_back(t_max);
        return grid;
      }
      if (grid.empty() && t > t_min * (1.0 + eps)) grid.push_back(t_min);
      grid.push_back(t);
    }
  }
}

std::vector<double> linear_time_grid(double t_max, int n_points) {
  if (n_points < 2 || t_max <= 0.0)
    throw std::invalid_argument("linear_time_grid: bad arguments");
  std::vector<double> grid(static_cast<size_t>(n_points));
  for (int i = 0; i < n_points; ++i)
    grid[static_cast<size_t>(i)] = t_max * i / (n_points - 1);
  grid.front() = 0.0;
  grid.back() = t_max;
  return grid;
}

AveragedSeries run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
  if (cfg.mode == Mode::Shadows) return run_shadows(cfg);

  const std::vector<double> times = cfg.sample_times();
  const int N = cfg.n_realizations;
  std::vector<std::optional<TimeSeries>> slots(static_cast<size_t>(N));
  std::vector<char> aborted_flags(static_cast<size_t>(N), 0);
  std::vector<std::string> errors(static_cast<size_t>(N));

#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < N; ++r) {
    try {
      switch (cfg.mode) {
        case Mode::Evolve:
          slots[static_cast<size_t>(r)] = run_evolve_realization(cfg, times, r);
          break;
        case Mode::Ed:
          slots[static_cast<size_t>(r)] = run_ed_realization(cfg, times, r);
          break;
        case Mode::Lbit:
          slots[static_cast<size_t>(r)] = run_lbit_realization(cfg, times, r);
          break;
        default: break;
      }
    } catch (const EvolveAbort& e) {
      aborted_flags[static_cast<size_t>(r)] = 1;
      errors[static_cast<size_t>(r)] = e.what();
    } catch (const std::exception& e) {
      errors[static_cast<size_t>(r)] = e.what();
    }
  }

  std::vector<int> aborted;
  for (int r = 0; r < N; ++r) {
    if (aborted_flags[static_cast<size_t>(r)]) {
      aborted.push_back(r);
    } else if (!slots[static_cast<size_t>(r)]) {
      throw std::runtime_error("realization " + std::to_string(r) +
                               " failed: " + errors[static_cast<size_t>(r)]);
    }
  }
  if (static_cast<double>(aborted.size()) > 0.05 * N) {
    std::string msg = "run failed: " + std::to_string(aborted.size()) + "/" +
                      std::to_string(N) + " realizations aborted;";
    for (int r : aborted)
      msg += " r" + std::to_string(r) + ": " +
             errors[static_cast<size_t>(r)] + ";";
    throw std::runtime_error(msg);
  }

  // reduce in realization order
  const auto nt = static_cast<Eigen::Index>(times.size());
  AveragedSeries avg;
  avg.times = times;
  avg.n_realizations = N - static_cast<int>(aborted.size());
  avg.n_aborted = static_cast<int>(aborted.size());
  Eigen::MatrixXd h(nt, avg.n_realizations), m(nt, avg.n_realizations),
      e2(nt, avg.n_realizations), chi(nt, avg.n_realizations),
      disc(nt, avg.n_realizations);
  const int n_bins = cfg.num_sites + 1;
  Eigen::VectorXd pl = Eigen::VectorXd::Zero(nt * n_bins);
  Eigen::VectorXd pm = Eigen::VectorXd::Zero(nt * n_bins);
  bool have_pl = false, have_pm = false;
  int col = 0;
  for (int r = 0; r < N; ++r) {
    if (aborted_flags[static_cast<size_t>(r)]) continue;
    const TimeSeries& s = *slots[static_cast<size_t>(r)];
    for (Eigen::Index i = 0; i < nt; ++i) {
      h(i, col) = s.mean_length[static_cast<size_t>(i)];
      m(i, col) = s.mean_mass[static_cast<size_t>(i)];
      e2(i, col) = s.integrated_renyi2[static_cast<size_t>(i)];
      chi(i, col) = s.max_chi[static_cast<size_t>(i)];
      disc(i, col) = s.cumulative_discarded[static_cast<size_t>(i)];
    }
    if (!s.length_dists.empty()) {
      have_pl = true;
      for (Eigen::Index i = 0; i < nt; ++i)
        for (int b = 0; b < n_bins; ++b)
          pl[i * n_bins + b] += s.length_dists[static_cast<size_t>(i)].probs[b];
    }
    if (!s.mass_dists.empty()) {
      have_pm = true;
      for (Eigen::Index i = 0; i < nt; ++i)
        for (int b = 0; b < n_bins; ++b)
          pm[i * n_bins + b] += s.mass_dists[static_cast<size_t>(i)].probs[b];
    }
    ++col;
  }

  auto reduce = [&](const Eigen::MatrixXd& x, Eigen::VectorXd& mean,
                    Eigen::VectorXd& stderr_out) {
    mean = x.rowwise().mean();
    stderr_out = Eigen::VectorXd::Zero(nt);
    if (x.cols() > 1) {
      for (Eigen::Index i = 0; i < nt; ++i) {
        const double mu = mean[i];
        double ss = 0.0;
        for (Eigen::Index c = 0; c < x.cols(); ++c)
          ss += (x(i, c) - mu) * (x(i, c) - mu);
        stderr_out[i] = std::sqrt(ss / (x.cols() - 1) /
                                  static_cast<double>(x.cols()));
      }
    }
  };
  reduce(h, avg.h_mean, avg.h_stderr);
  reduce(m, avg.m_mean, avg.m_stderr);
  reduce(e2, avg.e2_mean, avg.e2_stderr);
  Eigen::VectorXd dummy;
  reduce(chi, avg.chi_mean, dummy);
  reduce(disc, avg.discarded_mean, dummy);

  // outputs
  const fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  write_file(dir / "series.csv", series_csv(avg));
  write_file(dir / "manifest.txt", manifest_text(cfg, aborted));
  if (cfg.keep_raw) {
    for (int r = 0; r < N; ++r) {
      if (aborted_flags[static_cast<size_t>(r)]) continue;
      const TimeSeries& s = *slots[static_cast<size_t>(r)];
      std::ostringstream os;
      os << "t,h,m,e2,chi_max,discarded\n";
      for (size_t i = 0; i < s.times.size(); ++i)
        os << fmt(s.times[i]) << ',' << fmt(s.mean_length[i]) << ','
           << fmt(s.mean_mass[i]) << ',' << fmt(s.integrated_renyi2[i]) << ','
           << s.max_chi[i] << ',' << fmt(s.cumulative_discarded[i]) << '\n';
      char name[32];
      std::snprintf(name, sizeof(name), "raw_r%04d.csv", r);
      write_file(dir / name, os.str());
    }
  }
  if (avg.n_realizations > 0 && (have_pl || have_pm)) {
    std::string header = "t,kind";
    for (int b = 0; b < n_bins; ++b) header += ",p" + std::to_string(b);
    header += '\n';
    pl /= avg.n_realizations;
    pm /= avg.n_realizations;
    for (Eigen::Index i = 0; i < nt; ++i) {
      const std::string tag = fmt_short(times[static_cast<size_t>(i)]);
      if (have_pl)
        write_file(dir / ("dist_length_" + tag + ".csv"),
                   header + distribution_row(times[static_cast<size_t>(i)],
                                             "length",
                                             pl.segment(i * n_bins, n_bins)));
      if (have_pm)
        write_file(dir / ("dist_mass_" + tag + ".csv"),
                   header + distribution_row(times[static_cast<size_t>(i)],
                                             "mass",
                                             pm.segment(i * n_bins, n_bins)));
    }
  }
  return avg;
}

double window_average(const std::vector<double>& times,
                      const Eigen::VectorXd& values, double window_length) {
  if (times.size() < 2 ||
      static_cast<Eigen::Index>(times.size()) != values.size())
    throw std::invalid_argument("window_average: bad series");
  if (times.front() > 1e-9 || times.back() < window_length - 1e-9)
    throw std::invalid_argument(
        "window_average: grid does not cover [0, L]");
  double integral = 0.0;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    double t0 = times[i], t1 = times[i + 1];
    if (t0 >= window_length) break;
    double v0 = values[static_cast<Eigen::Index>(i)];
    double v1 = values[static_cast<Eigen::Index>(i + 1)];
    if (t1 > window_length) {
      // cut the last panel at the window edge
      const double f = (window_length - t0) / (t1 - t0);
      v1 = v0 + f * (v1 - v0);
      t1 = window_length;
    }
    integral += 0.5 * (v0 + v1) * (t1 - t0);
  }
  return integral / window_length;
}

Eigen::VectorXd rescale_by_log_length(const Eigen::VectorXd& values,
                                      const std::vector<int>& sizes) {
  if (values.size() != static_cast<Eigen::Index>(sizes.size()))
    throw std::invalid_argument("rescale_by_log_length: size mismatch");
  Eigen::VectorXd out(values.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (sizes[static_cast<size_t>(i)] < 2)
      throw std::invalid_argument("rescale_by_log_length: L >= 2");
    out[i] = values[i] / std::log(sizes[static_cast<size_t>(i)]);
  }
  return out;
}

SeriesTable read_series_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("empty series file " + path);
  std::vector<std::array<double, 9>> rows;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::array<double, 9> row{};
    std::stringstream ss(line);
    std::string cell;
    for (int c = 0; c < 9; ++c) {
      if (!std::getline(ss, cell, ','))
        throw std::runtime_error("malformed series row: " + line);
      row[static_cast<size_t>(c)] = std::stod(cell);
    }
    rows.push_back(row);
  }
  SeriesTable t;
  const auto n = static_cast<Eigen::Index>(rows.size());
  t.h_mean.resize(n); t.h_stderr.resize(n);
  t.m_mean.resize(n); t.m_stderr.resize(n);
  t.e2_mean.resize(n); t.e2_stderr.resize(n);
  t.chi_mean.resize(n); t.discarded_mean.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<size_t>(i)];
    t.times.push_back(r[0]);
    t.h_mean[i] = r[1]; t.h_stderr[i] = r[2];
    t.m_mean[i] = r[3]; t.m_stderr[i] = r[4];
    t.e2_mean[i] = r[5]; t.e2_stderr[i] = r[6];
    t.chi_mean[i] = r[7]; t.discarded_mean[i] = r[8];
  }
  return t;
}

LinearFit fit_vs_log_time(const std::vector<double>& times,
                          const Eigen::VectorXd& values, double t_lo,
                          double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_lo || t > t_hi || t <= 0.0) continue;
    const double x = std::log(t);
    const double y = values[static_cast<Eigen::Index>(i)];
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++n;
  }
  if (n < 3) throw std::runtime_error("fit_vs_log_time: too few points");
  const double denom = n * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  fit.n_points = n;
  double ss = 0.0;
  for (size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    if (t < t_lo || t > t_hi || t <= 0.0) continue;
    const double resid = values[static_cast<Eigen::Index>(i)] -
                         (fit.slope * std::log(t) + fit.intercept);
    ss += resid * resid;
  }
  fit.stderr_slope = std::sqrt(ss / (n - 2) * n / denom);
  return fit;
}

}  // namespace opspread::harness
