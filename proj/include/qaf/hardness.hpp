#pragma once

#include <cstdint>
#include <vector>

#include "qaf/encoder.hpp"
#include "qaf/rng.hpp"

namespace qaf {

/// Simulated-annealing view of one instance with energies normalized by
/// the class constant, so temperatures are comparable across classes.
struct SaProblem {
    int n = 0;
    long long n_value = 0;
    std::vector<double> fields;                              // h_i / norm
    std::vector<std::vector<std::pair<int, double>>> adj;    // couplings / norm
    double offset = 0.0;
    double ground_energy = 0.0;  // 0 for factorization instances
};

SaProblem make_sa_problem(const Instance& inst, double norm);

/// Exponential-temperature annealing protocol: beta(j) = beta0 e^{j/j0}
/// over 10 * j0 single-site Metropolis updates.
struct AnnealConfig {
    double beta0 = 0.1;
    long long j0 = 1;
    std::uint64_t seed = 0;

    long long total_steps() const { return 10 * j0; }
};

struct SaResult {
    double final_energy = 0.0;
    bool success = false;  // final energy within 1e-12 of the ground energy
};

/// Metropolis rule min(1, exp(-beta delta_e)): downhill moves always
/// pass, uphill moves pass with the Boltzmann weight.
bool metropolis_accept(double delta_e, double beta, RngStream& rng);

/// One annealing run from a uniformly random spin configuration.
SaResult sa_run(const SaProblem& problem, const AnnealConfig& cfg);

struct HardnessReport {
    long long n_value = 0;
    std::vector<long long> j0_star;  // one sample per run
    int censored = 0;                // runs that hit the j0 cap
    double mean = 0.0;
    double median = 0.0;
    long long max = 0;
    /// Standard error of the mean over the samples.
    double std_error = 0.0;
};

/// Per run, sweeps j0 over the doubling grid 1, 2, 4, ... (fresh seed
/// per attempt) and records the first j0 whose run reaches the ground
/// state. Runs that never succeed below the cap are counted at the cap
/// and flagged as censored.
HardnessReport estimate_j0_star(const SaProblem& problem, int runs = 500, double beta0 = 0.1,
                                std::uint64_t master_seed = 0, long long j0_cap = 1LL << 20,
                                int workers = 1);

/// N values ordered by descending mean j0*; ties broken by ascending N.
std::vector<long long> rank_hardness(const std::vector<HardnessReport>& reports);

}  // namespace qaf
