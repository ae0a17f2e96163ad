#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qaf/mlp.hpp"
#include "qaf/replay.hpp"
#include "qaf/rng.hpp"

namespace qaf {

enum class RewardType { MinLogP, AveLogP, MinP, AveP, NegAveEnergy };

RewardType reward_type_from_name(const std::string& name);  // "R1".."R5"
std::string reward_type_name(RewardType type);

/// R1 = min ln p, R2 = mean ln p, R3 = min p, R4 = mean p,
/// R5 = -mean energy. Zero probabilities under the log rewards fall back
/// to ln(1e-12).
double reward_fn(const std::vector<double>& probs, RewardType type,
                 const std::vector<double>* energies = nullptr);

/// Hyperparameters of the schedule-configuration agent. Defaults follow
/// the training setup end to end: 26-dimensional states (20 positional
/// bits plus 6 schedule coefficients), actions bounded to +-0.01, twin
/// 512-wide critics over a 256-wide actor, and a slow Polyak target.
struct SacConfig {
    int sched_dim = 6;
    int episode_length = 40;
    int measure_every = 10;   // reward measured when t % measure_every == 0
    int episodes = 1000;
    double reward_scale = 5.0;
    RewardType reward_type = RewardType::MinLogP;

    double learning_rate = 3e-4;
    double gamma = 0.9;
    double alpha = 0.02;
    double polyak = 0.995;
    int target_update_interval = 2;
    int gradient_steps = 2;
    int batch_size = 128;
    int random_steps = 0;

    int hidden_layers = 2;
    int actor_hidden = 256;
    int critic_hidden = 512;
    double log_std_min = -10.0;
    double log_std_max = 1.0;
    double action_limit = 0.01;

    std::size_t buffer_capacity = 1'000'000;

    /// Target update direction. The default keeps a slowly moving target
    /// (target <- 0.995 target + 0.005 online); the literal variant
    /// applies target <- eta * online + (1 - eta) * target instead.
    bool polyak_literal = false;

    int monotone_grid = 1024;
    int max_resamples = 100;

    std::uint64_t seed = 0;

    int state_dim() const { return 20 + sched_dim; }
    std::vector<int> actor_dims() const;
    std::vector<int> critic_dims() const;
};

struct PolicySample {
    std::vector<double> action;    // squashed and scaled
    double log_prob = 0.0;
    std::vector<double> mean;      // network outputs (pre-squash)
    std::vector<double> log_std;   // after clamping
};

/// Draws a tanh-squashed Gaussian action from the actor head. The
/// network's last layer carries means in the first sched_dim outputs
/// and log-stds (clamped to [log_std_min, log_std_max]) in the rest.
/// log_prob includes the tanh and scale corrections.
PolicySample actor_sample(const Mlp& actor, const std::vector<double>& state,
                          const SacConfig& cfg, RngStream& rng);

/// Mean action without noise (evaluation).
std::vector<double> actor_mean_action(const Mlp& actor, const std::vector<double>& state,
                                      const SacConfig& cfg);

struct SacNets {
    Mlp actor;
    Mlp q1, q2;
    Mlp target1, target2;
    Adam adam_actor, adam_q1, adam_q2;
};

SacNets make_sac_nets(const SacConfig& cfg, std::uint64_t master_seed);

struct Batch {
    Matrix states;       // B x state_dim
    Matrix actions;      // B x sched_dim
    std::vector<double> rewards;
    Matrix next_states;  // B x state_dim
    std::vector<double> done;
};

Batch gather_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices,
                   const SacConfig& cfg);

/// Pure critic loss: mean squared TD error of both critics against
/// fixed targets. Exposed separately so gradients can be checked by
/// finite differences.
struct CriticLoss {
    double loss1 = 0.0;
    double loss2 = 0.0;
    Mlp::Gradients grads1;
    Mlp::Gradients grads2;
};
CriticLoss critic_loss(const Mlp& q1, const Mlp& q2, const Batch& batch,
                       const std::vector<double>& targets);

/// TD targets y = r + gamma (1 - done) (min Q-target(s', a') - alpha log pi(a'|s')),
/// with a' drawn from the current actor.
std::vector<double> critic_targets(const SacNets& nets, const Batch& batch, const SacConfig& cfg,
                                   RngStream& rng);

struct CriticUpdateResult {
    double loss1 = 0.0;
    double loss2 = 0.0;
};
CriticUpdateResult critic_update(SacNets& nets, const Batch& batch, const SacConfig& cfg,
                                 RngStream& rng);

/// Pure actor loss mean(alpha log pi(a~|s) - min Q(s, a~)) with the
/// reparameterized noise fixed by the caller (rows of `noise` are the
/// standard-normal draws).
struct ActorLoss {
    double loss = 0.0;
    Mlp::Gradients grads;
    double mean_log_std = 0.0;
};
ActorLoss actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2, const Matrix& states,
                     const Matrix& noise, const SacConfig& cfg);

double actor_update(SacNets& nets, const Batch& batch, const SacConfig& cfg, RngStream& rng);

/// Applies the configured Polyak rule to both targets.
void update_targets(SacNets& nets, const SacConfig& cfg);

}  // namespace qaf
