#include <doctest.h>

#include <cmath>

#include <algorithm>
#include <stdexcept>

#include "qaf/sac.hpp"

using namespace qaf;

namespace {

SacConfig tiny_config() {
    SacConfig cfg;
    cfg.sched_dim = 2;
    cfg.actor_hidden = 8;
    cfg.critic_hidden = 8;
    cfg.batch_size = 16;
    cfg.seed = 5150;
    return cfg;
}

Batch random_batch(const SacConfig& cfg, int rows, RngStream& rng) {
    Batch batch;
    batch.states = Matrix(rows, cfg.state_dim());
    batch.actions = Matrix(rows, cfg.sched_dim);
    batch.next_states = Matrix(rows, cfg.state_dim());
    batch.rewards.resize(static_cast<std::size_t>(rows));
    batch.done.resize(static_cast<std::size_t>(rows));
    for (double& v : batch.states.data) v = rng.uniform(-1.0, 1.0);
    for (double& v : batch.actions.data) v = rng.uniform(-0.01, 0.01);
    for (double& v : batch.next_states.data) v = rng.uniform(-1.0, 1.0);
    for (double& v : batch.rewards) v = rng.uniform(-2.0, 2.0);
    for (std::size_t i = 0; i < batch.done.size(); ++i) batch.done[i] = i % 5 == 0 ? 1.0 : 0.0;
    return batch;
}

// || fd - analytic ||_2 / || analytic ||_2 with central differences.
template <typename LossFn>
double fd_rel_error(Mlp& net, const std::vector<double>& analytic, LossFn&& loss, double h) {
    std::vector<double> params = net.flatten_params();
    double diff2 = 0.0, norm2 = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + h;
        net.set_params(params);
        const double up = loss();
        params[i] = keep - h;
        net.set_params(params);
        const double down = loss();
        params[i] = keep;
        const double fd = (up - down) / (2.0 * h);
        diff2 += (fd - analytic[i]) * (fd - analytic[i]);
        norm2 += analytic[i] * analytic[i];
    }
    net.set_params(params);
    return std::sqrt(diff2) / std::max(std::sqrt(norm2), 1e-12);
}

}  // namespace

TEST_CASE("reward functions") {
    CHECK(reward_fn({0.5}, RewardType::MinP) == doctest::Approx(0.5));
    CHECK(reward_fn({0.1, 0.2}, RewardType::AveP) == doctest::Approx(0.15));
    CHECK(reward_fn({0.1, 0.2}, RewardType::MinLogP) == doctest::Approx(std::log(0.1)));
    CHECK(reward_fn({0.1, 0.2}, RewardType::AveLogP) ==
          doctest::Approx(0.5 * (std::log(0.1) + std::log(0.2))));
    const std::vector<double> energies{1.5, 2.5};
    CHECK(reward_fn({}, RewardType::NegAveEnergy, &energies) == doctest::Approx(-2.0));
    // Zero probability falls back to the log floor instead of -inf.
    CHECK(reward_fn({0.0}, RewardType::MinLogP) == doctest::Approx(std::log(1e-12)));

    RngStream rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> probs(4);
        for (double& p : probs) p = rng.uniform(1e-6, 1.0);
        CHECK(reward_fn(probs, RewardType::MinLogP) <= reward_fn(probs, RewardType::AveLogP) + 1e-15);
        CHECK(reward_fn(probs, RewardType::MinP) <= reward_fn(probs, RewardType::AveP) + 1e-15);
    }
}

TEST_CASE("sampled actions respect the componentwise bound") {
    const SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    RngStream rng(17);
    std::vector<double> state(static_cast<std::size_t>(cfg.state_dim()));
    for (int trial = 0; trial < 500; ++trial) {
        for (double& v : state) v = rng.uniform(-1.0, 1.0);
        const PolicySample sample = actor_sample(nets.actor, state, cfg, rng);
        for (double a : sample.action) {
            CHECK(a <= cfg.action_limit);
            CHECK(a >= -cfg.action_limit);
        }
    }
}

TEST_CASE("forcing log-std to the lower clamp makes sampling deterministic") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    // Zero all weights; set mean biases and a strongly negative log-std bias.
    Mlp& actor = nets.actor;
    for (auto& w : actor.weights()) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : actor.biases()) std::fill(b.begin(), b.end(), 0.0);
    actor.biases().back() = {0.7, -0.3, -50.0, -50.0};  // means, then log-stds
    RngStream rng(23);
    const std::vector<double> state(static_cast<std::size_t>(cfg.state_dim()), 0.25);
    for (int trial = 0; trial < 20; ++trial) {
        const PolicySample sample = actor_sample(nets.actor, state, cfg, rng);
        CHECK(sample.log_std[0] == cfg.log_std_min);
        CHECK(sample.action[0] == doctest::Approx(0.01 * std::tanh(0.7)).epsilon(1e-3));
        CHECK(sample.action[1] == doctest::Approx(0.01 * std::tanh(-0.3)).epsilon(1e-3));
    }
}

TEST_CASE("policy density: log_prob integrates to one and matches sampling") {
    SacConfig cfg = tiny_config();
    cfg.sched_dim = 1;
    SacNets nets = make_sac_nets(cfg, 99);
    const std::vector<double> state(static_cast<std::size_t>(cfg.state_dim()), 0.3);

    const std::vector<double> head = nets.actor.forward_one(state);
    const double mean = head[0];
    const double log_std = std::clamp(head[1], cfg.log_std_min, cfg.log_std_max);
    const double sigma = std::exp(log_std);
    auto density = [&](double a) {
        const double t = a / cfg.action_limit;
        const double u = std::atanh(t);
        const double gauss =
            std::exp(-0.5 * (u - mean) * (u - mean) / (sigma * sigma)) / (sigma * std::sqrt(2.0 * M_PI));
        return gauss / (cfg.action_limit * (1.0 - t * t));
    };

    // Deterministic quadrature of the closed-form density over the box.
    const int grid = 400000;
    double integral = 0.0;
    const double width = 2.0 * cfg.action_limit / grid;
    for (int k = 0; k < grid; ++k)
        integral += density(-cfg.action_limit + (k + 0.5) * width) * width;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-4));

    // Histogram of sampler draws against the same density, 3 sigma per bin.
    RngStream rng(7);
    const int draws = 100000;
    const int bins = 16;
    std::vector<int> counts(bins, 0);
    std::vector<double> logp_sum(bins, 0.0);
    for (int i = 0; i < draws; ++i) {
        const PolicySample sample = actor_sample(nets.actor, state, cfg, rng);
        int bin = static_cast<int>((sample.action[0] + cfg.action_limit) / (2.0 * cfg.action_limit) * bins);
        bin = std::clamp(bin, 0, bins - 1);
        ++counts[static_cast<std::size_t>(bin)];
    }
    for (int bin = 0; bin < bins; ++bin) {
        const double lo = -cfg.action_limit + 2.0 * cfg.action_limit * bin / bins;
        const double hi = lo + 2.0 * cfg.action_limit / bins;
        double mass = 0.0;
        const int sub = 200;
        for (int k = 0; k < sub; ++k) mass += density(lo + (k + 0.5) * (hi - lo) / sub) * (hi - lo) / sub;
        const double expected = mass * draws;
        const double sigma_bin = std::sqrt(std::max(1.0, expected * (1.0 - mass)));
        CHECK(std::abs(counts[static_cast<std::size_t>(bin)] - expected) <= 3.0 * sigma_bin + 3.0);
    }
}

TEST_CASE("critic targets reduce to rewards when gamma and alpha vanish") {
    SacConfig cfg = tiny_config();
    cfg.gamma = 0.0;
    cfg.alpha = 0.0;
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    RngStream rng(11);
    const Batch batch = random_batch(cfg, 8, rng);
    RngStream trng(12);
    const auto targets = critic_targets(nets, batch, cfg, trng);
    for (std::size_t i = 0; i < targets.size(); ++i)
        CHECK(targets[i] == doctest::Approx(batch.rewards[i]));
}

TEST_CASE("identical twin critics produce identical losses") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    nets.q2 = nets.q1;
    RngStream rng(31);
    const Batch batch = random_batch(cfg, 12, rng);
    std::vector<double> targets(12);
    for (double& t : targets) t = rng.uniform(-1.0, 1.0);
    const CriticLoss losses = critic_loss(nets.q1, nets.q2, batch, targets);
    CHECK(losses.loss1 == doctest::Approx(losses.loss2).epsilon(1e-15));
}

TEST_CASE("critic gradients match finite differences") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    RngStream rng(41);
    const Batch batch = random_batch(cfg, 16, rng);
    std::vector<double> targets(16);
    for (double& t : targets) t = rng.uniform(-1.0, 1.0);

    const CriticLoss losses = critic_loss(nets.q1, nets.q2, batch, targets);
    const double err1 = fd_rel_error(
        nets.q1, Mlp::flatten_gradients(losses.grads1),
        [&]() { return critic_loss(nets.q1, nets.q2, batch, targets).loss1; }, 1e-5);
    CHECK(err1 < 1e-5);
    const double err2 = fd_rel_error(
        nets.q2, Mlp::flatten_gradients(losses.grads2),
        [&]() { return critic_loss(nets.q1, nets.q2, batch, targets).loss2; }, 1e-5);
    CHECK(err2 < 1e-5);
}

TEST_CASE("actor gradients match finite differences") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    RngStream rng(43);
    const Batch batch = random_batch(cfg, 16, rng);
    Matrix noise(16, cfg.sched_dim);
    for (double& v : noise.data) v = rng.normal();

    const ActorLoss result = actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, cfg);
    const double err = fd_rel_error(
        nets.actor, Mlp::flatten_gradients(result.grads),
        [&]() { return actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, cfg).loss; },
        1e-5);
    CHECK(err < 1e-5);
}

TEST_CASE("zero critics turn the actor loss into pure scaled entropy") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    for (auto& w : nets.q1.weights()) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : nets.q1.biases()) std::fill(b.begin(), b.end(), 0.0);
    nets.q2 = nets.q1;
    RngStream rng(53);
    const Batch batch = random_batch(cfg, 16, rng);
    Matrix noise(16, cfg.sched_dim);
    for (double& v : noise.data) v = rng.normal();

    SacConfig half = cfg;
    half.alpha = cfg.alpha;
    SacConfig twice = cfg;
    twice.alpha = 2.0 * cfg.alpha;
    const double loss1 = actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, half).loss;
    const double loss2 = actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, twice).loss;
    CHECK(loss2 == doctest::Approx(2.0 * loss1).epsilon(1e-12));
}

TEST_CASE("large alpha pushes the policy toward maximum entropy") {
    SacConfig cfg = tiny_config();
    cfg.alpha = 50.0;
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    // Start from a tight policy; the tanh-squashed entropy peaks near
    // log-std 0, so from below the entropy term pulls log-std upward.
    auto& head_bias = nets.actor.biases().back();
    for (int j = cfg.sched_dim; j < 2 * cfg.sched_dim; ++j)
        head_bias[static_cast<std::size_t>(j)] = -4.0;
    RngStream rng(61);
    const Batch batch = random_batch(cfg, 32, rng);

    double first = 0.0, last = 0.0;
    for (int step = 0; step < 100; ++step) {
        Matrix noise(32, cfg.sched_dim);
        for (double& v : noise.data) v = rng.normal();
        const ActorLoss result = actor_loss(nets.actor, nets.q1, nets.q2, batch.states, noise, cfg);
        if (step == 0) first = result.mean_log_std;
        last = result.mean_log_std;
        nets.adam_actor.step(nets.actor, result.grads);
    }
    CHECK(last > first);  // log-std climbs toward its upper clamp
}

TEST_CASE("target update direction honors the configuration flag") {
    SacConfig cfg = tiny_config();
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    const double online = nets.q1.weights()[0].at(0, 0);

    SacNets slow = nets;
    for (auto& w : slow.target1.weights()) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : slow.target1.biases()) std::fill(b.begin(), b.end(), 0.0);
    slow.target2 = slow.target1;
    update_targets(slow, cfg);
    CHECK(slow.target1.weights()[0].at(0, 0) == doctest::Approx(0.005 * online));

    SacConfig literal = cfg;
    literal.polyak_literal = true;
    SacNets fast = nets;
    for (auto& w : fast.target1.weights()) std::fill(w.data.begin(), w.data.end(), 0.0);
    for (auto& b : fast.target1.biases()) std::fill(b.begin(), b.end(), 0.0);
    fast.target2 = fast.target1;
    update_targets(fast, literal);
    CHECK(fast.target1.weights()[0].at(0, 0) == doctest::Approx(0.995 * online));
}

TEST_CASE("replay buffer: fifo eviction and distinct batch indices") {
    ReplayBuffer buffer(8);
    for (int k = 0; k < 20; ++k) {
        Transition t;
        t.reward = static_cast<double>(k);
        buffer.push(std::move(t));
        CHECK(buffer.size() == std::min<std::size_t>(static_cast<std::size_t>(k) + 1, 8));
    }
    // Entries 12..19 survive after twenty pushes into capacity eight.
    double lowest = 1e9;
    for (std::size_t i = 0; i < buffer.size(); ++i) lowest = std::min(lowest, buffer[i].reward);
    CHECK(lowest == 12.0);

    RngStream rng(71);
    for (int trial = 0; trial < 50; ++trial) {
        auto picks = buffer.sample_indices(5, rng);
        CHECK(picks.size() == 5);
        std::sort(picks.begin(), picks.end());
        CHECK(std::adjacent_find(picks.begin(), picks.end()) == picks.end());
        CHECK(picks.back() < buffer.size());
    }
    CHECK_THROWS_AS(buffer.sample_indices(9, rng), std::invalid_argument);
}
