#include "qaf/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "qaf/parallel.hpp"

namespace qaf {

DiagonalProblem make_diagonal_problem(const Instance& inst, double norm) {
    if (norm <= 0.0) throw std::invalid_argument("make_diagonal_problem: norm must be positive");
    if (!inst.ground.computed)
        throw std::invalid_argument("make_diagonal_problem: instance lacks a ground set");
    DiagonalProblem p;
    p.n = inst.qubits();
    p.n_value = inst.n_value;
    p.energies = inst.ising.diagonal();
    for (double& e : p.energies) e /= norm;
    p.ground = inst.ground.states;
    p.transverse_scale = 1.0 / norm;
    return p;
}

StateVector initial_state(int n) {
    if (n < 1) throw std::invalid_argument("initial_state: n must be >= 1");
    const std::size_t dim = std::size_t{1} << n;
    return StateVector(dim, std::complex<double>(std::pow(2.0, -0.5 * n), 0.0));
}

namespace {

// psi[z] *= exp(-i * coef * energies[z])
void apply_diagonal(StateVector& psi, const std::vector<double>& energies, double coef) {
    const std::size_t dim = psi.size();
    for (std::size_t z = 0; z < dim; ++z) {
        const double ang = coef * energies[z];
        const double cs = std::cos(ang);
        const double sn = std::sin(ang);
        const double ar = psi[z].real();
        const double ai = psi[z].imag();
        psi[z] = {ar * cs + ai * sn, ai * cs - ar * sn};
    }
}

// Applies exp(i * theta * sigma_x) on every qubit.
void apply_transverse(StateVector& psi, int n, double theta) {
    const double cs = std::cos(theta);
    const double sn = std::sin(theta);
    const std::size_t dim = psi.size();
    for (int k = 0; k < n; ++k) {
        const std::size_t bit = std::size_t{1} << k;
        for (std::size_t base = 0; base < dim; base += 2 * bit) {
            for (std::size_t off = 0; off < bit; ++off) {
                const std::size_t i0 = base + off;
                const std::size_t i1 = i0 + bit;
                const double ar = psi[i0].real(), ai = psi[i0].imag();
                const double br = psi[i1].real(), bi = psi[i1].imag();
                psi[i0] = {cs * ar - sn * bi, cs * ai + sn * br};
                psi[i1] = {cs * br - sn * ai, cs * bi + sn * ar};
            }
        }
    }
}

}  // namespace

void evolve_in_place(StateVector& psi, const DiagonalProblem& problem,
                     const std::function<double(double)>& lambda, double total_time,
                     long long steps) {
    if (steps < 1) throw std::invalid_argument("evolve_in_place: steps must be >= 1");
    if (total_time <= 0.0) throw std::invalid_argument("evolve_in_place: total time must be positive");
    if (psi.size() != (std::size_t{1} << problem.n))
        throw std::invalid_argument("evolve_in_place: state dimension mismatch");

    const double dt = total_time / static_cast<double>(steps);
    std::vector<double> lam(static_cast<std::size_t>(steps));
    for (long long k = 0; k < steps; ++k)
        lam[static_cast<std::size_t>(k)] = lambda((static_cast<double>(k) + 0.5) / static_cast<double>(steps));

    // Strang splitting with adjacent diagonal half-steps fused.
    apply_diagonal(psi, problem.energies, 0.5 * dt * lam[0]);
    for (long long k = 0; k < steps; ++k) {
        apply_transverse(psi, problem.n, dt * (1.0 - lam[static_cast<std::size_t>(k)]) * problem.transverse_scale);
        if (k + 1 < steps)
            apply_diagonal(psi, problem.energies,
                           0.5 * dt * (lam[static_cast<std::size_t>(k)] + lam[static_cast<std::size_t>(k + 1)]));
    }
    apply_diagonal(psi, problem.energies, 0.5 * dt * lam[static_cast<std::size_t>(steps - 1)]);
}

StateVector evolve(const EvolutionSpec& spec) {
    if (spec.problem == nullptr) throw std::invalid_argument("evolve: missing problem");
    StateVector psi = initial_state(spec.problem->n);
    const Schedule& sched = spec.schedule;
    evolve_in_place(psi, *spec.problem, [&sched](double s) { return sched.evaluate(s); },
                    spec.total_time, spec.steps);
    return psi;
}

double success_probability(const StateVector& psi, const std::vector<std::uint64_t>& ground) {
    double p = 0.0;
    for (std::uint64_t z : ground) p += std::norm(psi[static_cast<std::size_t>(z)]);
    return p;
}

double mean_energy(const StateVector& psi, const DiagonalProblem& problem) {
    double e = 0.0;
    for (std::size_t z = 0; z < psi.size(); ++z) e += std::norm(psi[z]) * problem.energies[z];
    return e;
}

namespace {

double state_norm(const StateVector& psi) {
    double s = 0.0;
    for (const auto& a : psi) s += std::norm(a);
    return std::sqrt(s);
}

}  // namespace

RefinedEvolution evolve_refined(const DiagonalProblem& problem, const Schedule& schedule,
                                double total_time, double tolerance, int max_doublings) {
    long long steps = std::max<long long>(1000, static_cast<long long>(std::ceil(10.0 * total_time)));
    EvolutionSpec spec{&problem, schedule, total_time, steps};
    StateVector psi = evolve(spec);
    double success = success_probability(psi, problem.ground);

    RefinedEvolution result;
    for (int r = 0; r < max_doublings; ++r) {
        spec.steps = steps * 2;
        StateVector fine = evolve(spec);
        const double fine_success = success_probability(fine, problem.ground);
        const bool done = std::abs(fine_success - success) < tolerance;
        psi = std::move(fine);
        success = fine_success;
        steps = spec.steps;
        result.refinements = r + 1;
        if (done) {
            result.converged = true;
            break;
        }
    }
    result.state = std::move(psi);
    result.steps = steps;
    result.success = success;
    result.energy = mean_energy(result.state, problem);
    result.norm_drift = std::abs(state_norm(result.state) - 1.0);
    return result;
}

CalibrationResult calibrate_evolution_time(const SizeClass& cls, double p_threshold, double t0,
                                           double ratio, double t_cap, int workers,
                                           double tolerance) {
    if (cls.instances.empty()) throw std::invalid_argument("calibrate_evolution_time: empty class");
    std::vector<DiagonalProblem> problems;
    problems.reserve(cls.instances.size());
    for (const Instance& inst : cls.instances)
        problems.push_back(make_diagonal_problem(inst, cls.norm_constant));

    CalibrationResult result;
    result.p_threshold = p_threshold;
    const Schedule quad = Schedule::quadratic();
    for (double t = t0; t <= t_cap; t *= ratio) {
        CalibrationPoint point;
        point.total_time = t;
        point.per_instance.assign(problems.size(), 0.0);
        parallel_for(problems.size(), workers, [&](std::size_t i) {
            point.per_instance[i] = evolve_refined(problems[i], quad, t, tolerance).success;
        });
        double mean = 0.0;
        for (double p : point.per_instance) mean += p;
        mean /= static_cast<double>(point.per_instance.size());
        point.mean_success = mean;
        result.grid.push_back(point);
        if (mean >= p_threshold) {
            result.total_time = t;
            result.reached = true;
            return result;
        }
    }
    // Grid exhausted: report the best point found.
    double best_mean = -1.0;
    for (const auto& point : result.grid)
        if (point.mean_success > best_mean) {
            best_mean = point.mean_success;
            result.total_time = point.total_time;
        }
    result.reached = false;
    return result;
}

SplitReport classify_instances(const SizeClass& cls, double total_time, double p_threshold,
                               int workers, double tolerance) {
    SplitReport report;
    report.total_time = total_time;
    report.p_threshold = p_threshold;
    std::vector<double> probs(cls.instances.size(), 0.0);
    const Schedule quad = Schedule::quadratic();
    parallel_for(cls.instances.size(), workers, [&](std::size_t i) {
        const DiagonalProblem problem = make_diagonal_problem(cls.instances[i], cls.norm_constant);
        probs[i] = evolve_refined(problem, quad, total_time, tolerance).success;
    });
    for (std::size_t i = 0; i < cls.instances.size(); ++i) {
        const long long n_value = cls.instances[i].n_value;
        report.success.emplace_back(n_value, probs[i]);
        if (probs[i] < p_threshold)
            report.hard.push_back(n_value);
        else
            report.easy.push_back(n_value);
    }
    std::sort(report.easy.begin(), report.easy.end());
    std::sort(report.hard.begin(), report.hard.end());
    std::sort(report.success.begin(), report.success.end());
    return report;
}

}  // namespace qaf
