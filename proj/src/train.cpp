#include "qaf/train.hpp"

#include <algorithm>
#include <stdexcept>

#include "qaf/parallel.hpp"

namespace qaf {

TransferMode transfer_mode_from_name(const std::string& name) {
    if (name == "fresh") return TransferMode::Fresh;
    if (name == "actor") return TransferMode::Actor;
    if (name == "critic") return TransferMode::Critic;
    if (name == "both") return TransferMode::Both;
    if (name == "schedule") return TransferMode::Schedule;
    throw std::invalid_argument("unknown transfer mode: " + name);
}

std::string transfer_mode_name(TransferMode mode) {
    switch (mode) {
        case TransferMode::Fresh: return "fresh";
        case TransferMode::Actor: return "actor";
        case TransferMode::Critic: return "critic";
        case TransferMode::Both: return "both";
        case TransferMode::Schedule: return "schedule";
    }
    return "fresh";
}

SacNets transfer_init(const SacConfig& cfg, const Checkpoint& source, TransferMode mode) {
    if (source.sched_dim != cfg.sched_dim)
        throw std::invalid_argument("transfer_init: coefficient dimension mismatch");
    SacNets nets = make_sac_nets(cfg, cfg.seed);
    auto check = [&](const Mlp& a, const Mlp& b) {
        if (a.dims() != b.dims()) throw std::invalid_argument("transfer_init: network shape mismatch");
    };
    if (mode == TransferMode::Actor || mode == TransferMode::Both) {
        check(nets.actor, source.actor);
        nets.actor = source.actor;
    }
    if (mode == TransferMode::Critic || mode == TransferMode::Both) {
        check(nets.q1, source.q1);
        nets.q1 = source.q1;
        nets.q2 = source.q2;
        nets.target1 = source.target1;
        nets.target2 = source.target2;
    }
    return nets;
}

TrainResult train(const SacConfig& cfg, const ScheduleEnv& env, int qubit_size, TransferMode mode,
                  const Checkpoint* source) {
    if (mode != TransferMode::Fresh && source == nullptr)
        throw std::invalid_argument("train: transfer mode requires a source checkpoint");

    SacNets nets = mode == TransferMode::Fresh ? make_sac_nets(cfg, cfg.seed)
                                               : transfer_init(cfg, *source, mode);
    std::vector<double> b0(static_cast<std::size_t>(cfg.sched_dim), 0.0);
    if (mode == TransferMode::Schedule) b0 = source->best_b;

    ReplayBuffer buffer(cfg.buffer_capacity);
    RngStream act_rng = substream(cfg.seed, "actor", 0);
    RngStream update_rng = substream(cfg.seed, "actor", 1);
    RngStream buffer_rng = substream(cfg.seed, "buffer");

    TrainResult result;
    result.best_reward = -std::numeric_limits<double>::infinity();
    result.best_b = b0;

    int measurement_index = 0;
    long long gradient_counter = 0;

    for (int episode = 1; episode <= cfg.episodes; ++episode) {
        EnvState state = env.reset(b0);
        for (int t = 1; t <= cfg.episode_length; ++t) {
            const ValidAction act = sample_valid_action(nets.actor, env, state, cfg, act_rng);
            if (act.exhausted) ++result.resample_exhaustions;
            const ScheduleEnv::StepResult step = env.step(state, act.action);

            Transition tr;
            tr.state = state.encoded();
            tr.action = act.action;
            tr.reward = step.reward;
            tr.next_state = step.next.encoded();
            tr.done = step.done;
            buffer.push(std::move(tr));

            if (step.measured) {
                ++measurement_index;
                if (step.reward > result.best_reward) {
                    result.best_reward = step.reward;
                    result.best_b = step.next.b;
                }
                MeasurementRecord rec;
                rec.episode = episode;
                rec.step = t;
                rec.index = measurement_index;
                rec.reward = step.reward;
                rec.best_reward = result.best_reward;
                if (!step.outcome.probs.empty()) {
                    rec.min_success = *std::min_element(step.outcome.probs.begin(), step.outcome.probs.end());
                    double mean = 0.0;
                    for (double p : step.outcome.probs) mean += p;
                    rec.mean_success = mean / static_cast<double>(step.outcome.probs.size());
                }
                result.trace.push_back(rec);
            }
            state = step.next;
        }

        if (buffer.size() >= static_cast<std::size_t>(cfg.batch_size)) {
            for (int g = 0; g < cfg.gradient_steps; ++g) {
                const auto indices = buffer.sample_indices(static_cast<std::size_t>(cfg.batch_size), buffer_rng);
                const Batch batch = gather_batch(buffer, indices, cfg);
                critic_update(nets, batch, cfg, update_rng);
                actor_update(nets, batch, cfg, update_rng);
                if (++gradient_counter % cfg.target_update_interval == 0) update_targets(nets, cfg);
            }
        }
    }

    Checkpoint ckpt;
    ckpt.version = 1;
    ckpt.sched_dim = cfg.sched_dim;
    ckpt.qubit_size = qubit_size;
    ckpt.actor = std::move(nets.actor);
    ckpt.q1 = std::move(nets.q1);
    ckpt.q2 = std::move(nets.q2);
    ckpt.target1 = std::move(nets.target1);
    ckpt.target2 = std::move(nets.target2);
    ckpt.adam_actor = std::move(nets.adam_actor);
    ckpt.adam_q1 = std::move(nets.adam_q1);
    ckpt.adam_q2 = std::move(nets.adam_q2);
    ckpt.best_b = result.best_b;
    ckpt.best_reward = result.best_reward;
    ckpt.rng_state = act_rng.serialize();
    ckpt.config_snapshot = sac_config_to_json(cfg);
    result.checkpoint = std::move(ckpt);
    return result;
}

HardSetDynamics::HardSetDynamics(const SizeClass& cls, const std::vector<long long>& hard_set,
                                 double total_time, int workers, double tolerance)
    : total_time_(total_time), workers_(workers) {
    for (long long n_value : hard_set) {
        const auto it = std::find_if(cls.instances.begin(), cls.instances.end(),
                                     [&](const Instance& inst) { return inst.n_value == n_value; });
        if (it == cls.instances.end())
            throw std::invalid_argument("HardSetDynamics: instance not in class: " + std::to_string(n_value));
        problems_.push_back(make_diagonal_problem(*it, cls.norm_constant));
        members_.push_back(n_value);
    }
    if (problems_.empty()) throw std::invalid_argument("HardSetDynamics: empty hard set");

    // Fix the slice count per instance from one refined baseline run; the
    // training loop then pays a single evolution per measurement.
    steps_.assign(problems_.size(), 0);
    const Schedule base = Schedule::linear();
    std::vector<RefinedEvolution> refined(problems_.size());
    parallel_for(problems_.size(), workers_, [&](std::size_t i) {
        refined[i] = evolve_refined(problems_[i], base, total_time_, tolerance);
        if (!refined[i].converged)
            throw std::runtime_error("HardSetDynamics: refinement did not converge for N = " +
                                     std::to_string(members_[i]));
        steps_[i] = refined[i].steps;
    });
}

MeasureOutcome HardSetDynamics::measure(const std::vector<double>& b) const {
    MeasureOutcome outcome;
    outcome.probs.assign(problems_.size(), 0.0);
    outcome.energies.assign(problems_.size(), 0.0);
    const Schedule sched = Schedule::fourier(b);
    parallel_for(problems_.size(), workers_, [&](std::size_t i) {
        EvolutionSpec spec{&problems_[i], sched, total_time_, steps_[i]};
        const StateVector psi = evolve(spec);
        outcome.probs[i] = success_probability(psi, problems_[i].ground);
        outcome.energies[i] = mean_energy(psi, problems_[i]);
    });
    return outcome;
}

MeasureFn HardSetDynamics::as_measure_fn(RewardType type) const {
    return [this, type](const std::vector<double>& b) {
        MeasureOutcome outcome = measure(b);
        outcome.reward = reward_fn(outcome.probs, type, &outcome.energies);
        return outcome;
    };
}

std::vector<std::pair<long long, double>> evaluate_schedule(const std::vector<double>& b,
                                                            const SizeClass& cls,
                                                            const std::vector<long long>& members,
                                                            double total_time, int workers,
                                                            double tolerance) {
    const Schedule sched = Schedule::fourier(b);
    if (!sched.is_monotone()) throw std::invalid_argument("evaluate_schedule: schedule not monotone");
    std::vector<std::pair<long long, double>> out(members.size());
    parallel_for(members.size(), workers, [&](std::size_t i) {
        const auto it = std::find_if(cls.instances.begin(), cls.instances.end(),
                                     [&](const Instance& inst) { return inst.n_value == members[i]; });
        if (it == cls.instances.end())
            throw std::invalid_argument("evaluate_schedule: instance not in class");
        const DiagonalProblem problem = make_diagonal_problem(*it, cls.norm_constant);
        out[i] = {members[i], evolve_refined(problem, sched, total_time, tolerance).success};
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace qaf
