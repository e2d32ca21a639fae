#include "relaybeam/simulator.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numeric>
#include <optional>
#include <thread>
#include <utility>

#include "relaybeam/airlink.hpp"
#include "relaybeam/beamformer.hpp"
#include "relaybeam/channel.hpp"
#include "relaybeam/errors.hpp"
#include "relaybeam/estimator.hpp"

namespace relaybeam {

namespace {

using Cplx = Complex<double>;

// Uniform start scaled so the mismatched, diagonally loaded power estimate
// (epsilon pinned at eps_max/2) meets the budget exactly.
Eigen::VectorXcd bootstrap_weights(const Eigen::MatrixXcd& f_mismatched,
                                   const Eigen::VectorXd& source_powers,
                                   double p_n, double p_t, double eps_max) {
  Eigen::VectorXd d = f_mismatched.cwiseAbs2() * source_powers;
  d.array() += p_n;
  d.array() += (eps_max / 2.0) * d.norm();
  const double c = std::sqrt(p_t / d.sum());
  return Eigen::VectorXcd::Constant(f_mismatched.rows(), Cplx(c, 0.0));
}

unsigned thread_cap(int trials) {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("RELAYBEAM_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<unsigned>(v);
  }
  return std::min<unsigned>(n, static_cast<unsigned>(std::max(trials, 1)));
}

std::vector<AlgoSeries> empty_series() {
  return {{"ccsp", {}}, {"perfect_csi", {}}, {"naive_mismatched", {}}};
}

double trial_readout(const std::vector<double>& trajectory,
                     bool time_averaged) {
  if (!time_averaged) return trajectory.back();
  const double sum =
      std::accumulate(trajectory.begin(), trajectory.end(), 0.0);
  return sum / static_cast<double>(trajectory.size());
}

}  // namespace

TrialTrajectories run_trial(const ScenarioConfig& cfg, RandomEngine& rng) {
  const Eigen::Index m = cfg.M;
  const Eigen::Index k = cfg.K;
  const double p_n = cfg.noise_power_w();
  const double p_t = cfg.pt_w();
  const Eigen::VectorXd p_s = cfg.source_powers_w();
  SolveOptions opts;
  opts.omit_power_in_loading = cfg.paper_literal_eq33;

  const RelayGeometry<double> geo = sample_geometry<double>(m, rng);
  Eigen::MatrixXcd f;
  Eigen::VectorXcd g;

  // Running true-channel covariances; their Frobenius norms set the scale of
  // the injected errors so the realized error covariance matches the one the
  // estimator assumes.
  std::vector<Eigen::MatrixXcd> acc_f(
      static_cast<std::size_t>(k), Eigen::MatrixXcd::Zero(m, m));
  Eigen::MatrixXcd acc_g = Eigen::MatrixXcd::Zero(m, m);

  EstimatorState<double> state =
      make_estimator_state<double>(m, k, cfg.epsilon_max, cfg.n_components);
  std::optional<ChannelEstimates<double>> last_estimates;
  Eigen::VectorXcd w_prev;

  TrialTrajectories out;
  out.ccsp.reserve(cfg.snapshots);
  out.perfect_csi.reserve(cfg.snapshots);
  out.naive_mismatched.reserve(cfg.snapshots);

  for (int i = 1; i <= cfg.snapshots; ++i) {
    try {
      if (i == 1 || !cfg.static_channels)
        std::tie(f, g) = sample_channels(geo, k, cfg.L_db, cfg.rho,
                                         cfg.sigma_s_db, rng);
      Eigen::VectorXd r_f_norms(k);
      for (Eigen::Index c = 0; c < k; ++c) {
        acc_f[static_cast<std::size_t>(c)] +=
            f.col(c) * f.col(c).adjoint();
        r_f_norms(c) = acc_f[static_cast<std::size_t>(c)].norm() / i;
      }
      acc_g += g * g.adjoint();
      const double r_g_norm = acc_g.norm() / i;

      const ChannelState<double> chan =
          inject_mismatch(f, g, cfg.epsilon_max, cfg.g_mismatch, r_f_norms,
                          r_g_norm, rng);

      if (i == 1)
        w_prev = bootstrap_weights(chan.F_mismatched, p_s, p_n, p_t,
                                   cfg.epsilon_max);

      Eigen::VectorXcd symbols(k);
      for (Eigen::Index c = 0; c < k; ++c) symbols(c) = qpsk_symbol<double>(rng);
      const Eigen::VectorXcd relay_noise = complex_normal_vector(rng, m, p_n);
      const Cplx dest_noise = complex_normal(rng, p_n);

      const Eigen::VectorXcd x = transmit_hop(f, symbols, p_s, relay_noise);
      const Cplx z = destination_receive(g, relay_forward(w_prev, x),
                                         dest_noise);
      update(state, x, z, chan.F_mismatched, chan.g_mismatched);

      Eigen::VectorXcd w_ccsp;
      try {
        const ChannelEstimates<double> est = estimate_all(state);
        last_estimates = est;
        w_ccsp =
            solve_max_sinr(estimated_stats(est.f, est.g, p_s, p_n, p_t), opts)
                .w;
      } catch (const degenerate_projection&) {
        if (last_estimates.has_value()) {
          w_ccsp = solve_max_sinr(estimated_stats(last_estimates->f,
                                                  last_estimates->g, p_s, p_n,
                                                  p_t),
                                  opts)
                       .w;
        } else {
          w_ccsp = w_prev;  // first snapshot degenerated: keep the bootstrap
        }
      }

      const SecondOrderStats<double> true_stats = exact_stats(f, g, p_s, p_n);
      const SecondOrderStats<double> mismatched_stats =
          exact_stats(chan.F_mismatched, chan.g_mismatched, p_s, p_n);
      const Eigen::VectorXcd w_perfect =
          solve_max_sinr(solve_inputs(true_stats, p_t), opts).w;
      const Eigen::VectorXcd w_naive =
          solve_max_sinr(solve_inputs(mismatched_stats, p_t), opts).w;

      out.ccsp.push_back(evaluate_sinr(w_ccsp, true_stats));
      out.perfect_csi.push_back(evaluate_sinr(w_perfect, true_stats));
      out.naive_mismatched.push_back(evaluate_sinr(w_naive, true_stats));
      w_prev = w_ccsp;
    } catch (const degenerate_projection&) {
      throw;  // handled above; anything reaching here is a logic error
    } catch (const config_error&) {
      throw;
    } catch (const std::exception& e) {
      throw numerical_error("snapshot " + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

std::vector<TrialTrajectories> run_trials(const ScenarioConfig& cfg) {
  std::vector<TrialTrajectories> results(
      static_cast<std::size_t>(cfg.trials));
  const unsigned n_threads = thread_cap(cfg.trials);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    while (true) {
      const int t = next.fetch_add(1);
      if (t >= cfg.trials) break;
      {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (first_error) break;
      }
      try {
        RandomEngine rng = make_stream(cfg.seed, static_cast<std::uint64_t>(t));
        results[static_cast<std::size_t>(t)] = run_trial(cfg, rng);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error)
          first_error = std::make_exception_ptr(numerical_error(
              "trial " + std::to_string(t) + ", " + e.what()));
      }
    }
  };

  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  return results;
}

SweepSpec resolve_sweep(const ScenarioConfig& cfg) {
  SweepSpec spec;
  spec.axis = cfg.sweep_axis;
  if (spec.axis != "snapshots") spec.grid = parse_grid(cfg.sweep_grid);
  return spec;
}

SinrReport run_experiment(const ScenarioConfig& cfg, const SweepSpec& sweep) {
  validate(cfg);
  SinrReport report;
  report.config = cfg;
  report.axis_name = sweep.axis;
  report.series = empty_series();

  if (sweep.axis == "snapshots") {
    const auto trials = run_trials(cfg);
    report.axis.resize(cfg.snapshots);
    for (int i = 0; i < cfg.snapshots; ++i) report.axis[i] = i + 1;
    auto average = [&](auto member) {
      std::vector<double> sinr_db(cfg.snapshots);
      for (int i = 0; i < cfg.snapshots; ++i) {
        double sum = 0.0;
        for (const auto& t : trials) sum += (t.*member)[i];
        sinr_db[i] = linear_to_db(sum / static_cast<double>(trials.size()));
      }
      return sinr_db;
    };
    report.series[0].sinr_db = average(&TrialTrajectories::ccsp);
    report.series[1].sinr_db = average(&TrialTrajectories::perfect_csi);
    report.series[2].sinr_db = average(&TrialTrajectories::naive_mismatched);
    return report;
  }

  if (sweep.axis != "pt_dbw" && sweep.axis != "snr_db")
    throw config_error("sweep_axis", "must be one of pt_dbw, snr_db, snapshots");
  if (sweep.grid.empty()) throw config_error("sweep_grid", "empty grid");

  for (const double value : sweep.grid) {
    ScenarioConfig point = cfg;
    if (sweep.axis == "pt_dbw")
      point.pt_dbw = value;
    else
      point.snr_db = value;
    const auto trials = run_trials(point);
    auto average = [&](auto member) {
      double sum = 0.0;
      for (const auto& t : trials)
        sum += trial_readout(t.*member, cfg.time_averaged_sweep);
      return linear_to_db(sum / static_cast<double>(trials.size()));
    };
    report.axis.push_back(value);
    report.series[0].sinr_db.push_back(average(&TrialTrajectories::ccsp));
    report.series[1].sinr_db.push_back(
        average(&TrialTrajectories::perfect_csi));
    report.series[2].sinr_db.push_back(
        average(&TrialTrajectories::naive_mismatched));
  }
  return report;
}

SinrReport run_experiment(const ScenarioConfig& cfg) {
  return run_experiment(cfg, resolve_sweep(cfg));
}

}  // namespace relaybeam
