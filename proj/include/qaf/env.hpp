#pragma once

#include <functional>
#include <vector>

#include "qaf/sac.hpp"
#include "qaf/schedule.hpp"

namespace qaf {

/// Positional code of a step index: one-hot(t / 10) over ten slots
/// followed by one-hot(t mod 10) over ten slots, so exactly two bits are
/// set for any t in [1, 99].
std::vector<double> double_one_hot(int t);

struct EnvState {
    int t = 1;                // 1-based step index
    std::vector<double> b;    // schedule coefficients

    std::vector<double> encoded() const;  // [double_one_hot(t), b]
};

/// Outcome of one schedule measurement: the reward plus whatever the
/// evaluator observed (empty for analytic rewards).
struct MeasureOutcome {
    double reward = 0.0;          // unscaled reward
    std::vector<double> probs;    // per-instance success probabilities
    std::vector<double> energies; // per-instance normalized final energies
};

using MeasureFn = std::function<MeasureOutcome(const std::vector<double>& b)>;

/// Schedule-configuration environment. Actions shift the Fourier
/// coefficients inside [-1, 1]^C under the monotonicity constraint; the
/// measurement callback is invoked every `measure_every` steps and its
/// reward is scaled by `reward_scale`, all other steps return zero
/// reward.
class ScheduleEnv {
  public:
    ScheduleEnv(SacConfig cfg, MeasureFn measure);

    /// Requires b0 within bounds and monotone.
    EnvState reset(const std::vector<double>& b0) const;

    /// True when clamp(b + a) still describes a monotone schedule.
    bool action_valid(const EnvState& state, const std::vector<double>& action) const;

    struct StepResult {
        EnvState next;
        double reward = 0.0;
        bool done = false;
        bool measured = false;
        MeasureOutcome outcome;
    };
    StepResult step(const EnvState& state, const std::vector<double>& action) const;

    const SacConfig& config() const { return cfg_; }

  private:
    SacConfig cfg_;
    MeasureFn measure_;
};

/// Draws actions until one passes the monotonicity constraint, up to
/// cfg.max_resamples; afterwards the zero action is substituted (always
/// valid from a monotone state). Returns the number of resamples used.
struct ValidAction {
    std::vector<double> action;
    int resamples = 0;
    bool exhausted = false;
};
ValidAction sample_valid_action(const Mlp& actor, const ScheduleEnv& env, const EnvState& state,
                                const SacConfig& cfg, RngStream& rng);

}  // namespace qaf
