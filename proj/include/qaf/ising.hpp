#pragma once

#include <cstdint>
#include <vector>

#include "qaf/qubo.hpp"

namespace qaf {

/// Diagonal problem Hamiltonian H_P = offset + sum_i h_i s_i
/// + sum_{i<j} J_ij s_i s_j  with the spin convention s_i = 1 - 2 x_i
/// (x = 0 maps to s = +1). Built from integer QUBOs, so every entry is
/// an exact dyadic rational and energies reproduce QUBO values exactly.
struct IsingHamiltonian {
    int n = 0;
    std::vector<double> fields;  // h_i
    struct Coupling {
        int i, j;  // i < j
        double value;
    };
    std::vector<Coupling> couplings;
    double offset = 0.0;

    /// Energy of the bitstring x (bit i of `bits` is x_i).
    double energy(std::uint64_t bits) const;

    /// Energies of all 2^n bitstrings, indexed by bitstring value.
    std::vector<double> diagonal() const;
};

/// Substitutes x_i = (1 - s_i)/2 into a quadratic QUBO. Rejects higher
/// order input.
IsingHamiltonian to_ising(const QuboPolynomial& poly);

struct GroundResult {
    double min_energy = 0.0;
    std::vector<std::uint64_t> states;  // ascending bitstring order

    bool computed = false;
};

/// Exhaustive scan over all 2^n spin configurations (Gray-code order
/// internally, results sorted by bitstring). Guarded to n <= 24.
GroundResult brute_force_ground(const IsingHamiltonian& h);

}  // namespace qaf
