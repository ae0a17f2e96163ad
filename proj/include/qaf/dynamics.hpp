#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "qaf/encoder.hpp"
#include "qaf/schedule.hpp"

namespace qaf {

using StateVector = std::vector<std::complex<double>>;

/// Problem Hamiltonian prepared for time evolution: diagonal energies
/// divided by the class normalization constant, the ground-state
/// bitstrings, and the normalized transverse-field strength 1/norm.
/// The full interpolating Hamiltonian is
///   H(s) = [(1 - lambda(s)) H_B + lambda(s) H_P] / norm,
/// with H_B = -sum_i sigma_x_i (ground state |+>^n).
struct DiagonalProblem {
    int n = 0;
    long long n_value = 0;
    std::vector<double> energies;       // E(z) / norm
    std::vector<std::uint64_t> ground;  // zero-energy bitstrings
    double transverse_scale = 0.0;      // 1 / norm
};

DiagonalProblem make_diagonal_problem(const Instance& inst, double norm);

/// Uniform superposition, the ground state of H_B.
StateVector initial_state(int n);

struct EvolutionSpec {
    const DiagonalProblem* problem = nullptr;
    Schedule schedule;
    double total_time = 0.0;  // T, in units of the normalized Hamiltonian
    long long steps = 0;      // time slices
};

/// Second-order symmetric split-step propagation over spec.steps slices
/// (half diagonal phase, per-qubit x rotation, half diagonal phase; the
/// schedule is sampled at slice midpoints and adjacent half phases are
/// fused). The generalized form takes any lambda(s).
void evolve_in_place(StateVector& psi, const DiagonalProblem& problem,
                     const std::function<double(double)>& lambda, double total_time,
                     long long steps);
StateVector evolve(const EvolutionSpec& spec);

double success_probability(const StateVector& psi, const std::vector<std::uint64_t>& ground);

/// <psi| H_P/norm |psi>.
double mean_energy(const StateVector& psi, const DiagonalProblem& problem);

struct RefinedEvolution {
    StateVector state;
    long long steps = 0;        // slice count of the accepted run
    double success = 0.0;
    double energy = 0.0;        // normalized mean energy of the final state
    double norm_drift = 0.0;    // | ||psi|| - 1 | of the accepted run
    bool converged = false;
    int refinements = 0;
};

/// Runs the propagator starting at max(1000, ceil(10 T)) slices and
/// doubles the slice count until the success probability moves by less
/// than `tolerance` between consecutive resolutions.
RefinedEvolution evolve_refined(const DiagonalProblem& problem, const Schedule& schedule,
                                double total_time, double tolerance = 1e-6,
                                int max_doublings = 10);

struct CalibrationPoint {
    double total_time = 0.0;
    double mean_success = 0.0;
    std::vector<double> per_instance;
};

struct CalibrationResult {
    double total_time = 0.0;   // first grid point reaching the threshold
    bool reached = false;      // false -> grid exhausted, best point reported
    double p_threshold = 0.0;
    std::vector<CalibrationPoint> grid;
};

/// Sweeps T over the geometric grid t0 * ratio^k (quadratic schedule)
/// until the class-average success probability reaches p_threshold.
CalibrationResult calibrate_evolution_time(const SizeClass& cls, double p_threshold,
                                           double t0 = 10.0, double ratio = 1.2,
                                           double t_cap = 2e5, int workers = 1,
                                           double tolerance = 1e-6);

struct SplitReport {
    double total_time = 0.0;
    double p_threshold = 0.0;
    std::vector<long long> easy;  // N values, ascending
    std::vector<long long> hard;
    std::vector<std::pair<long long, double>> success;  // N -> probability
};

/// Splits a class into easy/hard at the threshold using the quadratic
/// schedule at evolution time T.
SplitReport classify_instances(const SizeClass& cls, double total_time, double p_threshold,
                               int workers = 1, double tolerance = 1e-6);

}  // namespace qaf
