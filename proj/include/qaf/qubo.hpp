#pragma once

#include <cstdint>
#include <map>
#include <vector>

namespace qaf {

using VarIndex = int;

/// Sorted, duplicate-free set of variable indices. The empty monomial is
/// the constant term and is kept out of the term map.
using Monomial = std::vector<VarIndex>;

/// Integer-coefficient multilinear polynomial over binary variables.
///
/// Idempotence (x^2 = x) is applied when monomials are canonicalized, so
/// term keys are sets. Coefficients stay exact integers until the final
/// conversion to Ising form.
struct QuboPolynomial {
    int num_vars = 0;
    long long constant = 0;
    std::map<Monomial, long long> terms;

    /// Accumulates coef * prod(vars); sorts/dedups the monomial and drops
    /// terms whose coefficient cancels to zero.
    void add_term(Monomial mono, long long coef);

    long long evaluate(const std::vector<std::uint8_t>& bits) const;
    long long evaluate_bits(std::uint64_t bits) const;

    int max_order() const;

    /// Largest |coefficient| over terms of degree >= 1 (constant excluded).
    long long max_abs_coefficient() const;

    bool is_quadratic() const { return max_order() <= 2; }
};

}  // namespace qaf
