#include "qaf/sac.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaf {

RewardType reward_type_from_name(const std::string& name) {
    if (name == "R1") return RewardType::MinLogP;
    if (name == "R2") return RewardType::AveLogP;
    if (name == "R3") return RewardType::MinP;
    if (name == "R4") return RewardType::AveP;
    if (name == "R5") return RewardType::NegAveEnergy;
    throw std::invalid_argument("unknown reward type: " + name);
}

std::string reward_type_name(RewardType type) {
    switch (type) {
        case RewardType::MinLogP: return "R1";
        case RewardType::AveLogP: return "R2";
        case RewardType::MinP: return "R3";
        case RewardType::AveP: return "R4";
        case RewardType::NegAveEnergy: return "R5";
    }
    return "R1";
}

double reward_fn(const std::vector<double>& probs, RewardType type,
                 const std::vector<double>* energies) {
    if (type == RewardType::NegAveEnergy) {
        if (energies == nullptr || energies->empty())
            throw std::invalid_argument("reward_fn: R5 needs per-instance energies");
        double mean = 0.0;
        for (double e : *energies) mean += e;
        return -mean / static_cast<double>(energies->size());
    }
    if (probs.empty()) throw std::invalid_argument("reward_fn: empty probability list");
    auto safe_log = [](double p) { return std::log(std::max(p, 1e-12)); };
    switch (type) {
        case RewardType::MinLogP:
            return safe_log(*std::min_element(probs.begin(), probs.end()));
        case RewardType::AveLogP: {
            double mean = 0.0;
            for (double p : probs) mean += safe_log(p);
            return mean / static_cast<double>(probs.size());
        }
        case RewardType::MinP:
            return *std::min_element(probs.begin(), probs.end());
        case RewardType::AveP: {
            double mean = 0.0;
            for (double p : probs) mean += p;
            return mean / static_cast<double>(probs.size());
        }
        default:
            break;
    }
    throw std::logic_error("reward_fn: unreachable");
}

std::vector<int> SacConfig::actor_dims() const {
    std::vector<int> dims{state_dim()};
    for (int l = 0; l < hidden_layers; ++l) dims.push_back(actor_hidden);
    dims.push_back(2 * sched_dim);  // means and log-stds
    return dims;
}

std::vector<int> SacConfig::critic_dims() const {
    std::vector<int> dims{state_dim() + sched_dim};
    for (int l = 0; l < hidden_layers; ++l) dims.push_back(critic_hidden);
    dims.push_back(1);
    return dims;
}

namespace {

constexpr double kHalfLog2Pi = 0.9189385332046727;  // ln(2 pi) / 2

// ln(1 - tanh(u)^2), stable for large |u|.
double log_one_minus_tanh_sq(double u) {
    const double a = std::abs(u);
    return 2.0 * (std::log(2.0) - a - std::log1p(std::exp(-2.0 * a)));
}

struct HeadSample {
    double u, t, action, log_std, sigma;
    bool clamped;
};

HeadSample squash_one(double mean, double raw_log_std, double eps, const SacConfig& cfg) {
    HeadSample h;
    h.clamped = raw_log_std < cfg.log_std_min || raw_log_std > cfg.log_std_max;
    h.log_std = std::clamp(raw_log_std, cfg.log_std_min, cfg.log_std_max);
    h.sigma = std::exp(h.log_std);
    h.u = mean + h.sigma * eps;
    h.t = std::tanh(h.u);
    h.action = cfg.action_limit * h.t;
    return h;
}

double sample_log_prob(const HeadSample& h, double eps, const SacConfig& cfg) {
    return -kHalfLog2Pi - h.log_std - 0.5 * eps * eps - std::log(cfg.action_limit) -
           log_one_minus_tanh_sq(h.u);
}

}  // namespace

PolicySample actor_sample(const Mlp& actor, const std::vector<double>& state, const SacConfig& cfg,
                          RngStream& rng) {
    const std::vector<double> out = actor.forward_one(state);
    const int d = cfg.sched_dim;
    PolicySample sample;
    sample.action.resize(static_cast<std::size_t>(d));
    sample.mean.assign(out.begin(), out.begin() + d);
    sample.log_std.resize(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) {
        const double eps = rng.normal();
        const HeadSample h = squash_one(out[static_cast<std::size_t>(j)],
                                        out[static_cast<std::size_t>(d + j)], eps, cfg);
        sample.action[static_cast<std::size_t>(j)] = h.action;
        sample.log_std[static_cast<std::size_t>(j)] = h.log_std;
        sample.log_prob += sample_log_prob(h, eps, cfg);
    }
    return sample;
}

std::vector<double> actor_mean_action(const Mlp& actor, const std::vector<double>& state,
                                      const SacConfig& cfg) {
    const std::vector<double> out = actor.forward_one(state);
    std::vector<double> action(static_cast<std::size_t>(cfg.sched_dim));
    for (int j = 0; j < cfg.sched_dim; ++j)
        action[static_cast<std::size_t>(j)] = cfg.action_limit * std::tanh(out[static_cast<std::size_t>(j)]);
    return action;
}

SacNets make_sac_nets(const SacConfig& cfg, std::uint64_t master_seed) {
    SacNets nets;
    nets.actor = Mlp(cfg.actor_dims());
    nets.q1 = Mlp(cfg.critic_dims());
    nets.q2 = Mlp(cfg.critic_dims());
    RngStream r0 = substream(master_seed, "init", 0);
    RngStream r1 = substream(master_seed, "init", 1);
    RngStream r2 = substream(master_seed, "init", 2);
    nets.actor.init_glorot(r0);
    nets.q1.init_glorot(r1);
    nets.q2.init_glorot(r2);
    nets.target1 = nets.q1;
    nets.target2 = nets.q2;
    nets.adam_actor.learning_rate = cfg.learning_rate;
    nets.adam_q1.learning_rate = cfg.learning_rate;
    nets.adam_q2.learning_rate = cfg.learning_rate;
    nets.adam_actor.reset(nets.actor.param_count());
    nets.adam_q1.reset(nets.q1.param_count());
    nets.adam_q2.reset(nets.q2.param_count());
    return nets;
}

Batch gather_batch(const ReplayBuffer& buffer, const std::vector<std::size_t>& indices,
                   const SacConfig& cfg) {
    Batch batch;
    const int b = static_cast<int>(indices.size());
    batch.states = Matrix(b, cfg.state_dim());
    batch.actions = Matrix(b, cfg.sched_dim);
    batch.next_states = Matrix(b, cfg.state_dim());
    batch.rewards.resize(static_cast<std::size_t>(b));
    batch.done.resize(static_cast<std::size_t>(b));
    for (int r = 0; r < b; ++r) {
        const Transition& t = buffer[indices[static_cast<std::size_t>(r)]];
        std::copy(t.state.begin(), t.state.end(), batch.states.row(r));
        std::copy(t.action.begin(), t.action.end(), batch.actions.row(r));
        std::copy(t.next_state.begin(), t.next_state.end(), batch.next_states.row(r));
        batch.rewards[static_cast<std::size_t>(r)] = t.reward;
        batch.done[static_cast<std::size_t>(r)] = t.done ? 1.0 : 0.0;
    }
    return batch;
}

namespace {

Matrix concat_state_action(const Matrix& states, const Matrix& actions) {
    Matrix joined(states.rows, states.cols + actions.cols);
    for (int r = 0; r < states.rows; ++r) {
        std::copy(states.row(r), states.row(r) + states.cols, joined.row(r));
        std::copy(actions.row(r), actions.row(r) + actions.cols, joined.row(r) + states.cols);
    }
    return joined;
}

}  // namespace

std::vector<double> critic_targets(const SacNets& nets, const Batch& batch, const SacConfig& cfg,
                                   RngStream& rng) {
    const int b = batch.states.rows;
    Matrix next_actions(b, cfg.sched_dim);
    std::vector<double> log_probs(static_cast<std::size_t>(b));
    std::vector<double> state(static_cast<std::size_t>(cfg.state_dim()));
    for (int r = 0; r < b; ++r) {
        std::copy(batch.next_states.row(r), batch.next_states.row(r) + cfg.state_dim(), state.begin());
        const PolicySample sample = actor_sample(nets.actor, state, cfg, rng);
        std::copy(sample.action.begin(), sample.action.end(), next_actions.row(r));
        log_probs[static_cast<std::size_t>(r)] = sample.log_prob;
    }
    const Matrix joined = concat_state_action(batch.next_states, next_actions);
    const Matrix qt1 = nets.target1.forward(joined);
    const Matrix qt2 = nets.target2.forward(joined);
    std::vector<double> targets(static_cast<std::size_t>(b));
    for (int r = 0; r < b; ++r) {
        const double qmin = std::min(qt1.at(r, 0), qt2.at(r, 0));
        const double soft = qmin - cfg.alpha * log_probs[static_cast<std::size_t>(r)];
        targets[static_cast<std::size_t>(r)] =
            batch.rewards[static_cast<std::size_t>(r)] +
            cfg.gamma * (1.0 - batch.done[static_cast<std::size_t>(r)]) * soft;
    }
    return targets;
}

CriticLoss critic_loss(const Mlp& q1, const Mlp& q2, const Batch& batch,
                       const std::vector<double>& targets) {
    const int b = batch.states.rows;
    const Matrix joined = concat_state_action(batch.states, batch.actions);
    CriticLoss result;
    result.grads1 = q1.make_gradients();
    result.grads2 = q2.make_gradients();
    const double inv_b = 1.0 / static_cast<double>(b);

    auto one = [&](const Mlp& net, Mlp::Gradients& grads, double& loss) {
        Mlp::Cache cache;
        const Matrix q = net.forward_cached(joined, cache);
        Matrix dout(b, 1);
        for (int r = 0; r < b; ++r) {
            const double err = q.at(r, 0) - targets[static_cast<std::size_t>(r)];
            loss += err * err * inv_b;
            dout.at(r, 0) = 2.0 * err * inv_b;
        }
        net.backward(cache, dout, grads);
    };
    one(q1, result.grads1, result.loss1);
    one(q2, result.grads2, result.loss2);
    return result;
}

CriticUpdateResult critic_update(SacNets& nets, const Batch& batch, const SacConfig& cfg,
                                 RngStream& rng) {
    const std::vector<double> targets = critic_targets(nets, batch, cfg, rng);
    CriticLoss losses = critic_loss(nets.q1, nets.q2, batch, targets);
    nets.adam_q1.step(nets.q1, losses.grads1);
    nets.adam_q2.step(nets.q2, losses.grads2);
    return {losses.loss1, losses.loss2};
}

ActorLoss actor_loss(const Mlp& actor, const Mlp& q1, const Mlp& q2, const Matrix& states,
                     const Matrix& noise, const SacConfig& cfg) {
    const int b = states.rows;
    const int d = cfg.sched_dim;
    const double inv_b = 1.0 / static_cast<double>(b);

    Mlp::Cache actor_cache;
    const Matrix head = actor.forward_cached(states, actor_cache);

    // Reparameterized actions and log-probabilities.
    Matrix actions(b, d);
    std::vector<HeadSample> samples(static_cast<std::size_t>(b) * d);
    std::vector<double> log_probs(static_cast<std::size_t>(b), 0.0);
    for (int r = 0; r < b; ++r) {
        for (int j = 0; j < d; ++j) {
            const HeadSample h =
                squash_one(head.at(r, j), head.at(r, d + j), noise.at(r, j), cfg);
            samples[static_cast<std::size_t>(r) * d + j] = h;
            actions.at(r, j) = h.action;
            log_probs[static_cast<std::size_t>(r)] += sample_log_prob(h, noise.at(r, j), cfg);
        }
    }

    const Matrix joined = concat_state_action(states, actions);
    Mlp::Cache cache1, cache2;
    const Matrix qv1 = q1.forward_cached(joined, cache1);
    const Matrix qv2 = q2.forward_cached(joined, cache2);

    ActorLoss result;
    Matrix dout1(b, 1), dout2(b, 1);
    for (int r = 0; r < b; ++r) {
        const double v1 = qv1.at(r, 0);
        const double v2 = qv2.at(r, 0);
        result.loss += (cfg.alpha * log_probs[static_cast<std::size_t>(r)] - std::min(v1, v2)) * inv_b;
        // d(-min q)/dq routed through the active critic only.
        if (v1 <= v2)
            dout1.at(r, 0) = -inv_b;
        else
            dout2.at(r, 0) = -inv_b;
    }

    Mlp::Gradients scratch1 = q1.make_gradients();
    Mlp::Gradients scratch2 = q2.make_gradients();
    const Matrix din1 = q1.backward(cache1, dout1, scratch1, true);
    const Matrix din2 = q2.backward(cache2, dout2, scratch2, true);

    // Push critic input-gradients (action slice) plus the entropy term
    // through the squashing head into the actor outputs.
    Matrix dhead(b, 2 * d);
    double mean_log_std = 0.0;
    for (int r = 0; r < b; ++r) {
        for (int j = 0; j < d; ++j) {
            const HeadSample& h = samples[static_cast<std::size_t>(r) * d + j];
            const double eps = noise.at(r, j);
            const double g_action = din1.at(r, cfg.state_dim() + j) + din2.at(r, cfg.state_dim() + j);
            const double dadu = cfg.action_limit * (1.0 - h.t * h.t);
            // d log pi / du = -2 tanh(u); by du/dmean = 1, du/dlogstd = sigma eps.
            const double dlogp_du = 2.0 * h.t;
            dhead.at(r, j) = cfg.alpha * inv_b * dlogp_du + g_action * dadu;
            double dl = cfg.alpha * inv_b * (-1.0 + dlogp_du * h.sigma * eps) +
                        g_action * dadu * h.sigma * eps;
            if (h.clamped) dl = 0.0;
            dhead.at(r, d + j) = dl;
            mean_log_std += h.log_std;
        }
    }
    result.mean_log_std = mean_log_std / static_cast<double>(b * d);

    result.grads = actor.make_gradients();
    actor.backward(actor_cache, dhead, result.grads);
    return result;
}

double actor_update(SacNets& nets, const Batch& batch, const SacConfig& cfg, RngStream& rng) {
    Matrix noise(batch.states.rows, cfg.sched_dim);
    for (double& x : noise.data) x = rng.normal();
    ActorLoss result = actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, cfg);
    nets.adam_actor.step(nets.actor, result.grads);
    return result.loss;
}

void update_targets(SacNets& nets, const SacConfig& cfg) {
    const double retention = cfg.polyak_literal ? 1.0 - cfg.polyak : cfg.polyak;
    polyak_update(nets.target1, nets.q1, retention);
    polyak_update(nets.target2, nets.q2, retention);
}

}  // namespace qaf
