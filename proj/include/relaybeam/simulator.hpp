/**
 * @file simulator.hpp
 * @brief Monte Carlo orchestration: per-snapshot trials of the adaptive
 *        beamformer against its baselines, and sweep experiments.
 *
 * Each trial fixes a relay geometry, then per snapshot: draws channels and
 * mismatch, runs the two-hop signal model with the previous weights, updates
 * the estimator, solves for new weights, and scores every algorithm's weights
 * against the true instantaneous statistics of that snapshot. Baselines:
 *   perfect_csi       solves with the true channels' statistics
 *   naive_mismatched  solves with the mismatched channels' statistics as-is
 *
 * Trials are embarrassingly parallel. Trial t uses the substream
 * make_stream(config.seed, t) regardless of sweep point, so sweep points share
 * channel realizations (common random numbers) and results do not depend on
 * the thread count. RELAYBEAM_THREADS caps the worker count.
 */
#pragma once

#include <string>
#include <vector>

#include "relaybeam/config.hpp"
#include "relaybeam/rng.hpp"
#include "relaybeam/types.hpp"

namespace relaybeam {

// Linear output SINR per snapshot, one entry per snapshot.
struct TrialTrajectories {
  std::vector<double> ccsp;
  std::vector<double> perfect_csi;
  std::vector<double> naive_mismatched;
};

TrialTrajectories run_trial(const ScenarioConfig& cfg, RandomEngine& rng);

// All trials at one operating point, slot t holding trial t's trajectories.
std::vector<TrialTrajectories> run_trials(const ScenarioConfig& cfg);

struct AlgoSeries {
  std::string algorithm;
  std::vector<double> sinr_db;  // one value per axis point
};

struct SinrReport {
  std::string axis_name;        // pt_dbw | snr_db | snapshots
  std::vector<double> axis;
  std::vector<AlgoSeries> series;  // ccsp, perfect_csi, naive_mismatched
  ScenarioConfig config;           // resolved configuration of the run
};

struct SweepSpec {
  std::string axis;
  std::vector<double> grid;  // ignored for the snapshots axis
};

SweepSpec resolve_sweep(const ScenarioConfig& cfg);

// Trial-averaged linear SINR per sweep point, converted to dB. P_T and SNR
// sweeps read the final snapshot (or the snapshot average when
// config.time_averaged_sweep); the snapshots axis reports the full trajectory.
SinrReport run_experiment(const ScenarioConfig& cfg, const SweepSpec& sweep);
SinrReport run_experiment(const ScenarioConfig& cfg);

}  // namespace relaybeam
