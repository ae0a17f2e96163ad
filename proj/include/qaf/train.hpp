#pragma once

#include <string>
#include <vector>

#include "qaf/checkpoint.hpp"
#include "qaf/dynamics.hpp"
#include "qaf/env.hpp"
#include "qaf/sac.hpp"

namespace qaf {

enum class TransferMode { Fresh, Actor, Critic, Both, Schedule };

TransferMode transfer_mode_from_name(const std::string& name);
std::string transfer_mode_name(TransferMode mode);

/// Network initialization for a training run. Actor mode copies the
/// actor only (fresh critics); critic mode copies critics and targets
/// (fresh actor); both copies all four; schedule mode keeps fresh
/// networks and instead seeds the episode start at the source's best
/// schedule. Optimizer moments reset in every mode.
SacNets transfer_init(const SacConfig& cfg, const Checkpoint& source, TransferMode mode);

struct MeasurementRecord {
    int episode = 0;      // 1-based
    int step = 0;         // step index within the episode
    int index = 0;        // global measurement counter, 1-based
    double reward = 0.0;  // scaled reward
    double best_reward = 0.0;
    double min_success = 0.0;
    double mean_success = 0.0;
};

struct TrainResult {
    Checkpoint checkpoint;
    std::vector<double> best_b;
    double best_reward = 0.0;
    std::vector<MeasurementRecord> trace;
    long long resample_exhaustions = 0;
};

/// Episodic SAC training over the environment: each episode resets to
/// b0, actions are resampled until monotone, every transition enters
/// the buffer (zero reward off the measurement grid), and gradient
/// steps run at episode end with periodic target updates.
TrainResult train(const SacConfig& cfg, const ScheduleEnv& env, int qubit_size,
                  TransferMode mode = TransferMode::Fresh, const Checkpoint* source = nullptr);

/// Measurement backend evaluating the hard set of a size class. The
/// slice count per instance is fixed once by a refined baseline run at
/// b0 and reused for every training measurement; final evaluations
/// re-refine from scratch.
class HardSetDynamics {
  public:
    HardSetDynamics(const SizeClass& cls, const std::vector<long long>& hard_set,
                    double total_time, int workers, double tolerance = 1e-6);

    MeasureOutcome measure(const std::vector<double>& b) const;
    MeasureFn as_measure_fn(RewardType type) const;

    const std::vector<long long>& members() const { return members_; }
    double total_time() const { return total_time_; }

  private:
    std::vector<DiagonalProblem> problems_;
    std::vector<long long> members_;
    std::vector<long long> steps_;
    double total_time_;
    int workers_;
};

/// One refined evolution per instance at the given schedule; returns
/// (N, success probability) pairs ordered by N.
std::vector<std::pair<long long, double>> evaluate_schedule(
    const std::vector<double>& b, const SizeClass& cls, const std::vector<long long>& members,
    double total_time, int workers = 1, double tolerance = 1e-6);

}  // namespace qaf
