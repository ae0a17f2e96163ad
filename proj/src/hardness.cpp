#include "qaf/hardness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qaf/parallel.hpp"
#include "qaf/rng.hpp"

namespace qaf {

SaProblem make_sa_problem(const Instance& inst, double norm) {
    if (norm <= 0.0) throw std::invalid_argument("make_sa_problem: norm must be positive");
    SaProblem p;
    p.n = inst.qubits();
    p.n_value = inst.n_value;
    p.fields.resize(static_cast<std::size_t>(p.n));
    for (int i = 0; i < p.n; ++i) p.fields[static_cast<std::size_t>(i)] = inst.ising.fields[static_cast<std::size_t>(i)] / norm;
    p.adj.assign(static_cast<std::size_t>(p.n), {});
    for (const auto& c : inst.ising.couplings) {
        p.adj[static_cast<std::size_t>(c.i)].emplace_back(c.j, c.value / norm);
        p.adj[static_cast<std::size_t>(c.j)].emplace_back(c.i, c.value / norm);
    }
    p.offset = inst.ising.offset / norm;
    if (!inst.ground.computed) throw std::invalid_argument("make_sa_problem: instance lacks a ground set");
    p.ground_energy = inst.ground.min_energy / norm;
    return p;
}

bool metropolis_accept(double delta_e, double beta, RngStream& rng) {
    if (delta_e <= 0.0) return true;
    return rng.uniform() < std::exp(-beta * delta_e);
}

SaResult sa_run(const SaProblem& problem, const AnnealConfig& cfg) {
    if (cfg.j0 < 1) throw std::invalid_argument("sa_run: j0 must be >= 1");
    RngStream rng(cfg.seed);

    // Infinite-temperature start: uniformly random spins.
    std::vector<double> spins(static_cast<std::size_t>(problem.n));
    double energy = problem.offset;
    for (int i = 0; i < problem.n; ++i)
        spins[static_cast<std::size_t>(i)] = (rng.next_u64() & 1ULL) ? -1.0 : 1.0;
    for (int i = 0; i < problem.n; ++i) {
        const std::size_t si = static_cast<std::size_t>(i);
        energy += problem.fields[si] * spins[si];
        for (const auto& [j, v] : problem.adj[si])
            if (j > i) energy += v * spins[si] * spins[static_cast<std::size_t>(j)];
    }

    const long long total = cfg.total_steps();
    const double growth = std::exp(1.0 / static_cast<double>(cfg.j0));
    double beta = cfg.beta0;
    for (long long j = 1; j <= total; ++j) {
        beta *= growth;  // beta(j) = beta0 e^{j/j0}
        const std::size_t site = static_cast<std::size_t>(rng.uniform_int(static_cast<std::uint64_t>(problem.n)));
        double local = problem.fields[site];
        for (const auto& [k, v] : problem.adj[site]) local += v * spins[static_cast<std::size_t>(k)];
        const double delta = -2.0 * spins[site] * local;
        if (metropolis_accept(delta, beta, rng)) {
            spins[site] = -spins[site];
            energy += delta;
        }
    }
    return {energy, std::abs(energy - problem.ground_energy) < 1e-12};
}

HardnessReport estimate_j0_star(const SaProblem& problem, int runs, double beta0,
                                std::uint64_t master_seed, long long j0_cap, int workers) {
    HardnessReport report;
    report.n_value = problem.n_value;
    report.j0_star.assign(static_cast<std::size_t>(runs), 0);
    std::vector<std::uint8_t> censored(static_cast<std::size_t>(runs), 0);

    parallel_for(static_cast<std::size_t>(runs), workers, [&](std::size_t run) {
        long long found = 0;
        std::uint64_t attempt = 0;
        for (long long j0 = 1; j0 <= j0_cap; j0 *= 2, ++attempt) {
            AnnealConfig cfg;
            cfg.beta0 = beta0;
            cfg.j0 = j0;
            cfg.seed = mix_seed(master_seed, "sa", static_cast<std::uint64_t>(problem.n_value), run, attempt);
            if (sa_run(problem, cfg).success) {
                found = j0;
                break;
            }
        }
        if (found == 0) {
            found = j0_cap;
            censored[run] = 1;
        }
        report.j0_star[run] = found;
    });

    for (std::uint8_t c : censored) report.censored += c;
    std::vector<long long> sorted = report.j0_star;
    std::sort(sorted.begin(), sorted.end());
    double mean = 0.0;
    for (long long v : sorted) mean += static_cast<double>(v);
    mean /= static_cast<double>(runs);
    report.mean = mean;
    report.median = runs % 2 == 1
                        ? static_cast<double>(sorted[static_cast<std::size_t>(runs / 2)])
                        : 0.5 * (static_cast<double>(sorted[static_cast<std::size_t>(runs / 2 - 1)]) +
                                 static_cast<double>(sorted[static_cast<std::size_t>(runs / 2)]));
    report.max = sorted.back();
    double var = 0.0;
    for (long long v : sorted) {
        const double d = static_cast<double>(v) - mean;
        var += d * d;
    }
    if (runs > 1) var /= static_cast<double>(runs - 1);
    report.std_error = std::sqrt(var / static_cast<double>(runs));
    return report;
}

std::vector<long long> rank_hardness(const std::vector<HardnessReport>& reports) {
    std::vector<const HardnessReport*> order;
    order.reserve(reports.size());
    for (const auto& r : reports) order.push_back(&r);
    std::sort(order.begin(), order.end(), [](const HardnessReport* a, const HardnessReport* b) {
        if (a->mean != b->mean) return a->mean > b->mean;
        return a->n_value < b->n_value;
    });
    std::vector<long long> ranked;
    ranked.reserve(order.size());
    for (const auto* r : order) ranked.push_back(r->n_value);
    return ranked;
}

}  // namespace qaf
