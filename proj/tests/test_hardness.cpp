#include <doctest.h>

#include <cmath>

#include "qaf/hardness.hpp"
#include "qaf/rng.hpp"

using namespace qaf;

TEST_CASE("metropolis rule: downhill always accepted, uphill at the Boltzmann rate") {
    RngStream rng(101);
    for (int trial = 0; trial < 100; ++trial)
        CHECK(metropolis_accept(-rng.uniform(0.0, 5.0), rng.uniform(0.1, 10.0), rng));

    for (const auto& [beta, delta] : {std::pair{1.0, 0.7}, std::pair{2.5, 0.3}, std::pair{0.5, 2.0}}) {
        const int trials = 20000;
        int accepted = 0;
        for (int i = 0; i < trials; ++i) accepted += metropolis_accept(delta, beta, rng) ? 1 : 0;
        const double p = std::exp(-beta * delta);
        const double sigma = std::sqrt(p * (1.0 - p) / trials);
        CHECK(std::abs(static_cast<double>(accepted) / trials - p) < 3.0 * sigma + 1e-9);
    }
}

TEST_CASE("sa runs are bit-reproducible for a fixed seed") {
    const Instance inst = encode_instance(35, BitSplit{2, 2, 5}, 3);
    const SaProblem problem = make_sa_problem(inst, 576.0);
    AnnealConfig cfg;
    cfg.beta0 = 0.1;
    cfg.j0 = 64;
    cfg.seed = 20250809;
    const SaResult a = sa_run(problem, cfg);
    const SaResult b = sa_run(problem, cfg);
    CHECK(a.final_energy == b.final_energy);
    CHECK(a.success == b.success);
}

TEST_CASE("slow annealing succeeds on a two-spin toy") {
    SaProblem toy;
    toy.n = 2;
    toy.n_value = 0;
    toy.fields = {0.5, 0.25};
    toy.adj.assign(2, {});
    toy.adj[0].emplace_back(1, 0.25);
    toy.adj[1].emplace_back(0, 0.25);
    toy.offset = 0.0;
    toy.ground_energy = -0.5;  // spins (-1, +1): -0.5 + 0.25 - 0.25
    AnnealConfig cfg;
    cfg.beta0 = 0.1;
    cfg.j0 = 512;
    int successes = 0;
    for (int run = 0; run < 200; ++run) {
        cfg.seed = mix_seed(7, "toy", static_cast<std::uint64_t>(run));
        successes += sa_run(toy, cfg).success ? 1 : 0;
    }
    CHECK(successes == 200);
}

TEST_CASE("success probability is non-decreasing in j0 within sampling error") {
    for (long long n_value : {35LL, 49LL, 55LL}) {
        CAPTURE(n_value);
        const auto split = canonical_split(n_value, 3);
        REQUIRE(split.has_value());
        const Instance inst = encode_instance(n_value, *split, 3);
        const SaProblem problem = make_sa_problem(inst, inst.qubo.max_abs_coefficient());
        double previous = -1.0;
        for (long long j0 : {1LL, 4LL, 16LL, 64LL, 256LL}) {
            const int runs = 200;
            int successes = 0;
            for (int run = 0; run < runs; ++run) {
                AnnealConfig cfg;
                cfg.j0 = j0;
                cfg.seed = mix_seed(42, "mono", static_cast<std::uint64_t>(n_value),
                                    static_cast<std::uint64_t>(j0), static_cast<std::uint64_t>(run));
                successes += sa_run(problem, cfg).success ? 1 : 0;
            }
            const double rate = static_cast<double>(successes) / runs;
            // 3 sigma of a binomial proportion at n = 200 is at most ~0.11.
            CHECK(rate >= previous - 0.11);
            previous = rate;
        }
    }
}

TEST_CASE("j0* estimation on a trivial instance returns 1 in every run") {
    const Instance inst = encode_instance(15, BitSplit{1, 2, 3}, 3);
    const SaProblem problem = make_sa_problem(inst, inst.qubo.max_abs_coefficient());
    const HardnessReport report = estimate_j0_star(problem, 50, 0.1, 99, 1 << 20, 2);
    CHECK(report.censored == 0);
    for (long long sample : report.j0_star) CHECK(sample == 1);
    CHECK(report.mean == 1.0);
    CHECK(report.median == 1.0);
    CHECK(report.max == 1);
}

TEST_CASE("j0* reports are reproducible and stable under more runs") {
    const Instance inst = encode_instance(49, BitSplit{2, 2, 5}, 3);
    const SaProblem problem = make_sa_problem(inst, 576.0);
    const HardnessReport a = estimate_j0_star(problem, 120, 0.1, 4242, 1 << 20, 2);
    const HardnessReport b = estimate_j0_star(problem, 120, 0.1, 4242, 1 << 20, 1);
    CHECK(a.j0_star == b.j0_star);  // worker count does not affect the samples
    const HardnessReport big = estimate_j0_star(problem, 240, 0.1, 4242, 1 << 20, 2);
    // Doubling the run count keeps the mean within a few standard errors.
    CHECK(std::abs(big.mean - a.mean) < 4.0 * (a.std_error + big.std_error));
}

TEST_CASE("hardness ranking is a permutation with deterministic ties") {
    std::vector<HardnessReport> reports(3);
    reports[0].n_value = 65;
    reports[0].mean = 4.0;
    reports[1].n_value = 77;
    reports[1].mean = 9.0;
    reports[2].n_value = 55;
    reports[2].mean = 4.0;
    const auto ranking = rank_hardness(reports);
    CHECK(ranking == std::vector<long long>{77, 55, 65});
}
