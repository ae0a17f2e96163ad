#include "qaf/env.hpp"

#include <algorithm>
#include <stdexcept>

namespace qaf {

std::vector<double> double_one_hot(int t) {
    if (t < 1 || t > 99) throw std::out_of_range("double_one_hot: t must be in [1, 99]");
    std::vector<double> code(20, 0.0);
    code[static_cast<std::size_t>(t / 10)] = 1.0;
    code[static_cast<std::size_t>(10 + t % 10)] = 1.0;
    return code;
}

std::vector<double> EnvState::encoded() const {
    std::vector<double> state = double_one_hot(t);
    state.insert(state.end(), b.begin(), b.end());
    return state;
}

ScheduleEnv::ScheduleEnv(SacConfig cfg, MeasureFn measure)
    : cfg_(std::move(cfg)), measure_(std::move(measure)) {
    if (!measure_) throw std::invalid_argument("ScheduleEnv: missing measurement callback");
}

EnvState ScheduleEnv::reset(const std::vector<double>& b0) const {
    if (static_cast<int>(b0.size()) != cfg_.sched_dim)
        throw std::invalid_argument("ScheduleEnv::reset: coefficient dimension mismatch");
    for (double v : b0)
        if (v < -1.0 || v > 1.0)
            throw std::invalid_argument("ScheduleEnv::reset: coefficients outside [-1, 1]");
    if (!Schedule::fourier(b0).is_monotone(cfg_.monotone_grid))
        throw std::invalid_argument("ScheduleEnv::reset: initial schedule is not monotone");
    return EnvState{1, b0};
}

namespace {

std::vector<double> shifted(const std::vector<double>& b, const std::vector<double>& a) {
    std::vector<double> next(b.size());
    for (std::size_t j = 0; j < b.size(); ++j) next[j] = std::clamp(b[j] + a[j], -1.0, 1.0);
    return next;
}

}  // namespace

bool ScheduleEnv::action_valid(const EnvState& state, const std::vector<double>& action) const {
    return Schedule::fourier(shifted(state.b, action)).is_monotone(cfg_.monotone_grid);
}

ScheduleEnv::StepResult ScheduleEnv::step(const EnvState& state,
                                          const std::vector<double>& action) const {
    for (double a : action)
        if (std::abs(a) > cfg_.action_limit + 1e-12)
            throw std::invalid_argument("ScheduleEnv::step: action outside bounds");
    StepResult result;
    result.next.t = state.t + 1;
    result.next.b = shifted(state.b, action);
    result.done = state.t == cfg_.episode_length;
    if (state.t % cfg_.measure_every == 0) {
        result.measured = true;
        result.outcome = measure_(result.next.b);
        result.reward = cfg_.reward_scale * result.outcome.reward;
    }
    return result;
}

ValidAction sample_valid_action(const Mlp& actor, const ScheduleEnv& env, const EnvState& state,
                                const SacConfig& cfg, RngStream& rng) {
    ValidAction result;
    const std::vector<double> encoded = state.encoded();
    for (int attempt = 0; attempt <= cfg.max_resamples; ++attempt) {
        const PolicySample sample = actor_sample(actor, encoded, cfg, rng);
        if (env.action_valid(state, sample.action)) {
            result.action = sample.action;
            result.resamples = attempt;
            return result;
        }
    }
    result.action.assign(static_cast<std::size_t>(cfg.sched_dim), 0.0);
    result.resamples = cfg.max_resamples;
    result.exhausted = true;
    return result;
}

}  // namespace qaf
