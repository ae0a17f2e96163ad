#include "qaf/checkpoint.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace qaf {

namespace {

constexpr char kBase64Chars[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(kBase64Chars[(v >> 18) & 63]);
        out.push_back(kBase64Chars[(v >> 12) & 63]);
        out.push_back(kBase64Chars[(v >> 6) & 63]);
        out.push_back(kBase64Chars[v & 63]);
        i += 3;
    }
    const std::size_t rem = bytes.size() - i;
    if (rem == 1) {
        const std::uint32_t v = bytes[i] << 16;
        out.push_back(kBase64Chars[(v >> 18) & 63]);
        out.push_back(kBase64Chars[(v >> 12) & 63]);
        out.append("==");
    } else if (rem == 2) {
        const std::uint32_t v = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(kBase64Chars[(v >> 18) & 63]);
        out.push_back(kBase64Chars[(v >> 12) & 63]);
        out.push_back(kBase64Chars[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::vector<std::uint8_t> base64_decode(const std::string& text) {
    auto value_of = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    if (text.size() % 4 != 0) throw std::runtime_error("base64: malformed length");
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pads = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = text[i + k];
            if (c == '=') {
                vals[k] = 0;
                ++pads;
            } else {
                vals[k] = value_of(c);
                if (vals[k] < 0) throw std::runtime_error("base64: invalid character");
            }
        }
        const std::uint32_t v = (vals[0] << 18) | (vals[1] << 12) | (vals[2] << 6) | vals[3];
        out.push_back((v >> 16) & 0xff);
        if (pads < 2) out.push_back((v >> 8) & 0xff);
        if (pads < 1) out.push_back(v & 0xff);
    }
    return out;
}

}  // namespace

std::string encode_doubles(const std::vector<double>& values) {
    std::vector<std::uint8_t> bytes(values.size() * 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, &values[i], 8);
        for (int k = 0; k < 8; ++k)  // explicit little-endian layout
            bytes[i * 8 + static_cast<std::size_t>(k)] = static_cast<std::uint8_t>((bits >> (8 * k)) & 0xff);
    }
    return base64_encode(bytes);
}

std::vector<double> decode_doubles(const std::string& text) {
    const std::vector<std::uint8_t> bytes = base64_decode(text);
    if (bytes.size() % 8 != 0) throw std::runtime_error("decode_doubles: malformed payload");
    std::vector<double> values(bytes.size() / 8);
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::uint64_t bits = 0;
        for (int k = 7; k >= 0; --k)
            bits = (bits << 8) | bytes[i * 8 + static_cast<std::size_t>(k)];
        std::memcpy(&values[i], &bits, 8);
    }
    return values;
}

namespace {

nlohmann::json mlp_to_json(const Mlp& net) {
    nlohmann::json j;
    j["dims"] = net.dims();
    nlohmann::json layers = nlohmann::json::array();
    for (int l = 0; l < net.layer_count(); ++l) {
        const std::size_t lu = static_cast<std::size_t>(l);
        layers.push_back({{"weights", encode_doubles(net.weights()[lu].data)},
                          {"biases", encode_doubles(net.biases()[lu])}});
    }
    j["layers"] = layers;
    return j;
}

Mlp mlp_from_json(const nlohmann::json& j) {
    Mlp net(j.at("dims").get<std::vector<int>>());
    const auto& layers = j.at("layers");
    if (static_cast<int>(layers.size()) != net.layer_count())
        throw std::runtime_error("checkpoint: layer count mismatch");
    for (int l = 0; l < net.layer_count(); ++l) {
        const std::size_t lu = static_cast<std::size_t>(l);
        auto weights = decode_doubles(layers[lu].at("weights").get<std::string>());
        auto biases = decode_doubles(layers[lu].at("biases").get<std::string>());
        if (weights.size() != net.weights()[lu].data.size() || biases.size() != net.biases()[lu].size())
            throw std::runtime_error("checkpoint: layer shape mismatch");
        net.weights()[lu].data = std::move(weights);
        net.biases()[lu] = std::move(biases);
    }
    return net;
}

nlohmann::json adam_to_json(const Adam& adam) {
    return {{"t", adam.t},
            {"learning_rate", adam.learning_rate},
            {"m", encode_doubles(adam.m)},
            {"v", encode_doubles(adam.v)}};
}

Adam adam_from_json(const nlohmann::json& j) {
    Adam adam;
    adam.t = j.at("t").get<long long>();
    adam.learning_rate = j.at("learning_rate").get<double>();
    adam.m = decode_doubles(j.at("m").get<std::string>());
    adam.v = decode_doubles(j.at("v").get<std::string>());
    return adam;
}

}  // namespace

nlohmann::json sac_config_to_json(const SacConfig& cfg) {
    return {{"sched_dim", cfg.sched_dim},
            {"episode_length", cfg.episode_length},
            {"measure_every", cfg.measure_every},
            {"episodes", cfg.episodes},
            {"reward_scale", cfg.reward_scale},
            {"reward_type", reward_type_name(cfg.reward_type)},
            {"learning_rate", cfg.learning_rate},
            {"gamma", cfg.gamma},
            {"alpha", cfg.alpha},
            {"polyak", cfg.polyak},
            {"target_update_interval", cfg.target_update_interval},
            {"gradient_steps", cfg.gradient_steps},
            {"batch_size", cfg.batch_size},
            {"random_steps", cfg.random_steps},
            {"hidden_layers", cfg.hidden_layers},
            {"actor_hidden", cfg.actor_hidden},
            {"critic_hidden", cfg.critic_hidden},
            {"log_std_min", cfg.log_std_min},
            {"log_std_max", cfg.log_std_max},
            {"action_limit", cfg.action_limit},
            {"buffer_capacity", cfg.buffer_capacity},
            {"polyak_literal", cfg.polyak_literal},
            {"monotone_grid", cfg.monotone_grid},
            {"max_resamples", cfg.max_resamples},
            {"seed", cfg.seed}};
}

SacConfig sac_config_from_json(const nlohmann::json& j) {
    SacConfig cfg;
    cfg.sched_dim = j.at("sched_dim").get<int>();
    cfg.episode_length = j.at("episode_length").get<int>();
    cfg.measure_every = j.at("measure_every").get<int>();
    cfg.episodes = j.at("episodes").get<int>();
    cfg.reward_scale = j.at("reward_scale").get<double>();
    cfg.reward_type = reward_type_from_name(j.at("reward_type").get<std::string>());
    cfg.learning_rate = j.at("learning_rate").get<double>();
    cfg.gamma = j.at("gamma").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.polyak = j.at("polyak").get<double>();
    cfg.target_update_interval = j.at("target_update_interval").get<int>();
    cfg.gradient_steps = j.at("gradient_steps").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.random_steps = j.at("random_steps").get<int>();
    cfg.hidden_layers = j.at("hidden_layers").get<int>();
    cfg.actor_hidden = j.at("actor_hidden").get<int>();
    cfg.critic_hidden = j.at("critic_hidden").get<int>();
    cfg.log_std_min = j.at("log_std_min").get<double>();
    cfg.log_std_max = j.at("log_std_max").get<double>();
    cfg.action_limit = j.at("action_limit").get<double>();
    cfg.buffer_capacity = j.at("buffer_capacity").get<std::size_t>();
    cfg.polyak_literal = j.at("polyak_literal").get<bool>();
    cfg.monotone_grid = j.at("monotone_grid").get<int>();
    cfg.max_resamples = j.at("max_resamples").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt) {
    nlohmann::json j;
    j["format"] = "qaf-checkpoint";
    j["version"] = ckpt.version;
    j["sched_dim"] = ckpt.sched_dim;
    j["qubit_size"] = ckpt.qubit_size;
    j["networks"] = {{"actor", mlp_to_json(ckpt.actor)},
                     {"q1", mlp_to_json(ckpt.q1)},
                     {"q2", mlp_to_json(ckpt.q2)},
                     {"target1", mlp_to_json(ckpt.target1)},
                     {"target2", mlp_to_json(ckpt.target2)}};
    j["optimizers"] = {{"actor", adam_to_json(ckpt.adam_actor)},
                       {"q1", adam_to_json(ckpt.adam_q1)},
                       {"q2", adam_to_json(ckpt.adam_q2)}};
    j["best_b"] = ckpt.best_b;
    j["best_reward"] = ckpt.best_reward;
    j["rng_state"] = ckpt.rng_state;
    j["config"] = ckpt.config_snapshot;
    return j;
}

Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    if (!j.contains("format") || j.at("format").get<std::string>() != "qaf-checkpoint")
        throw std::runtime_error("checkpoint: not a checkpoint container");
    Checkpoint ckpt;
    ckpt.version = j.at("version").get<int>();
    if (ckpt.version != 1)
        throw std::runtime_error("checkpoint: unsupported version " + std::to_string(ckpt.version));
    ckpt.sched_dim = j.at("sched_dim").get<int>();
    ckpt.qubit_size = j.at("qubit_size").get<int>();
    const auto& nets = j.at("networks");
    ckpt.actor = mlp_from_json(nets.at("actor"));
    ckpt.q1 = mlp_from_json(nets.at("q1"));
    ckpt.q2 = mlp_from_json(nets.at("q2"));
    ckpt.target1 = mlp_from_json(nets.at("target1"));
    ckpt.target2 = mlp_from_json(nets.at("target2"));
    const auto& opts = j.at("optimizers");
    ckpt.adam_actor = adam_from_json(opts.at("actor"));
    ckpt.adam_q1 = adam_from_json(opts.at("q1"));
    ckpt.adam_q2 = adam_from_json(opts.at("q2"));
    ckpt.best_b = j.at("best_b").get<std::vector<double>>();
    ckpt.best_reward = j.at("best_reward").get<double>();
    ckpt.rng_state = j.at("rng_state").get<std::string>();
    ckpt.config_snapshot = j.at("config");
    return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("save_checkpoint: cannot open " + tmp);
        out << checkpoint_to_json(ckpt).dump(2) << '\n';
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("save_checkpoint: rename failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_checkpoint: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return checkpoint_from_json(j);
}

}  // namespace qaf
