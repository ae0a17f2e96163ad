#pragma once

#include <string>

#include <json.hpp>

#include "qaf/mlp.hpp"
#include "qaf/sac.hpp"

namespace qaf {

/// Versioned training snapshot: all five network weights, optimizer
/// moments, the best schedule found, and the configuration. Weight and
/// moment arrays are stored as base64-encoded little-endian 64-bit
/// floats, so a load/save round trip is byte identical.
struct Checkpoint {
    int version = 1;
    int sched_dim = 6;
    int qubit_size = 0;
    Mlp actor, q1, q2, target1, target2;
    Adam adam_actor, adam_q1, adam_q2;
    std::vector<double> best_b;
    double best_reward = 0.0;
    std::string rng_state;
    nlohmann::json config_snapshot;
};

nlohmann::json checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

/// Atomic write (temp file + rename).
void save_checkpoint(const std::string& path, const Checkpoint& ckpt);
/// Rejects unknown versions and malformed containers.
Checkpoint load_checkpoint(const std::string& path);

nlohmann::json sac_config_to_json(const SacConfig& cfg);
SacConfig sac_config_from_json(const nlohmann::json& j);

// Base64 helpers for little-endian double arrays (exposed for tests).
std::string encode_doubles(const std::vector<double>& values);
std::vector<double> decode_doubles(const std::string& text);

}  // namespace qaf
