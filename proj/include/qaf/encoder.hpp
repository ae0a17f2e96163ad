#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qaf/ising.hpp"
#include "qaf/qubo.hpp"

namespace qaf {

/// Bit-length indices of a candidate factor pair: lp = floor(log2 p),
/// lq = floor(log2 q), ln = floor(log2 N), with 1 <= lp <= lq. Both end
/// bits of p and q are fixed to 1, so the free bits are p_1..p_{lp-1}
/// and q_1..q_{lq-1}.
struct BitSplit {
    int lp = 0;
    int lq = 0;
    int ln = 0;

    friend bool operator==(const BitSplit&, const BitSplit&) = default;
};

/// All bit splits under which N factors as p*q with p, q odd and both
/// end bits set. Empty for even or prime N.
std::vector<BitSplit> enumerate_bit_splits(long long n_value);

/// Multiplication-table layout: the table columns 2^1..2^{lp+lq} are cut
/// into width-W blocks; each block hands its overflow to the next one
/// through a small register of carry bits.
struct BlockLayout {
    int width = 0;                      // W
    int full_blocks = 0;                // B_K = floor((lp+lq)/W)
    std::vector<long long> max_sums;    // per-block maximum value, i in [1, B_K]
    std::vector<int> carry_counts;      // c_i, carries leaving block i, i in [1, B_K]
    std::vector<int> carry_prefix;      // prefix[i] = sum of carry_counts before block i+1
    int total_carries = 0;              // T_C
    int num_blocks = 0;                 // P_N
    int aux_count = 0;                  // T_A = (lp-1)(lq-1)
    int total_qubits = 0;               // T_Q
};

/// Derives the layout for a split at block width w. Requires w >= 1 and
/// lp + lq >= w.
BlockLayout build_block_layout(const BitSplit& split, int w);

/// Layout if the split admits one at this width, otherwise nullopt.
std::optional<BlockLayout> try_block_layout(const BitSplit& split, int w);

struct Variable {
    enum class Role { PBit, QBit, Carry, Aux };
    Role role;
    int index;   // bit index for PBit/QBit (1-based), 1-based carry index for Carry
    int pair_m;  // Aux only: the (p_m, q_n) product this variable replaces
    int pair_n;
    std::string name;
};

/// Ordered variable table: p bits, q bits, carries, then one auxiliary
/// per (p_m, q_n) pair in lexicographic order. Indices into this table
/// are the QUBO variable indices and the bit positions of encoded
/// bitstrings (variable 0 = least significant bit).
struct VariableRegistry {
    BitSplit split;
    BlockLayout layout;
    std::vector<Variable> vars;

    int count() const { return static_cast<int>(vars.size()); }
    int p_offset() const { return 0; }
    int q_offset() const { return split.lp - 1; }
    int carry_offset() const { return split.lp - 1 + split.lq - 1; }
    int aux_offset() const { return carry_offset() + layout.total_carries; }
    int p_var(int m) const;          // variable index of p_m, m in [1, lp-1]
    int q_var(int n) const;
    int carry_var(int k) const;      // k in [1, T_C]
    int aux_var(int m, int n) const; // auxiliary for the pair (p_m, q_n)
};

VariableRegistry make_registry(const BitSplit& split, const BlockLayout& layout);

/// One linear block expression rho_i + K_i - F_i - V_i as a list of
/// (coefficient, monomial) entries; monomials have order <= 2.
struct BlockTerm {
    long long coef;
    Monomial mono;
};
std::vector<std::vector<BlockTerm>> block_expressions(long long n_value, const BitSplit& split,
                                                      const BlockLayout& layout,
                                                      const VariableRegistry& registry);

/// Squares one block expression with the idempotence rule applied.
QuboPolynomial square_block(const std::vector<BlockTerm>& expr, int num_vars);

/// Full cost function: sum over blocks of (rho_i + K_i - F_i - V_i)^2.
/// Terms reach order 4 (products of two p*q monomials).
std::pair<QuboPolynomial, VariableRegistry> build_cost_function(long long n_value,
                                                                const BitSplit& split,
                                                                const BlockLayout& layout);

/// Rewrites every cubic/quartic monomial through the per-pair auxiliary
/// gadget  +-x1 x2 x3 = min_x4 (+-x4 x3 + 2(x1 x2 - 2 x1 x4 - 2 x2 x4 + 3 x4)),
/// scaled by |coefficient|. Auxiliaries that no reduced monomial touches
/// still receive the defining gadget once so that no free variable
/// survives. The minimum over all variables is preserved and minimizers
/// project onto minimizers of the input.
QuboPolynomial reduce_to_quadratic(const QuboPolynomial& poly, const VariableRegistry& registry);

/// Reassembles (p, q) from an encoded bitstring; carry and auxiliary
/// bits are ignored and the fixed end bits are restored.
std::pair<long long, long long> decode_solution(std::uint64_t bits, const VariableRegistry& registry);

/// A fully encoded factorization instance.
struct Instance {
    long long n_value = 0;  // N
    int width = 0;          // W
    BitSplit split;
    VariableRegistry registry;
    QuboPolynomial qubo;    // reduced, quadratic
    IsingHamiltonian ising;
    GroundResult ground;    // exact; empty if ground was not computed

    int qubits() const { return registry.count(); }
};

/// Split minimizing total qubits (ties: smaller |lq - lp|, then smaller
/// lp). Splits that admit no layout at this width are skipped.
std::optional<BitSplit> canonical_split(long long n_value, int w);

Instance encode_instance(long long n_value, const BitSplit& split, int w, bool with_ground = true);

/// Instances of one qubit count plus the class-level normalization
/// constant max |QUBO coefficient| (degree >= 1 terms only; offsets are
/// excluded, and the exported manifests record that convention).
struct SizeClass {
    int qubits = 0;
    int width = 0;
    std::vector<Instance> instances;
    double norm_constant = 0.0;
    double calibrated_time = 0.0;  // T(n), filled by calibration
};

/// Encodes every odd composite in [lo, hi] whose canonical split yields
/// `qubits` total qubits. An empty class is returned as such, not as an
/// error.
SizeClass build_size_class(long long lo, long long hi, int qubits, int w);

/// All size classes over the range, keyed by qubit count ascending.
std::vector<SizeClass> build_size_classes(long long lo, long long hi, int w,
                                          int max_ground_qubits = 24);

}  // namespace qaf
