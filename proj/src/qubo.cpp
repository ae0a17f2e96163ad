#include "qaf/qubo.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace qaf {

void QuboPolynomial::add_term(Monomial mono, long long coef) {
    if (coef == 0) return;
    std::sort(mono.begin(), mono.end());
    mono.erase(std::unique(mono.begin(), mono.end()), mono.end());
    if (mono.empty()) {
        constant += coef;
        return;
    }
    if (mono.back() >= num_vars || mono.front() < 0)
        throw std::out_of_range("QuboPolynomial: variable index out of range");
    auto [it, inserted] = terms.try_emplace(std::move(mono), coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0) terms.erase(it);
    }
}

long long QuboPolynomial::evaluate(const std::vector<std::uint8_t>& bits) const {
    long long total = constant;
    for (const auto& [mono, coef] : terms) {
        bool on = true;
        for (VarIndex v : mono) {
            if (!bits[static_cast<std::size_t>(v)]) {
                on = false;
                break;
            }
        }
        if (on) total += coef;
    }
    return total;
}

long long QuboPolynomial::evaluate_bits(std::uint64_t bits) const {
    long long total = constant;
    for (const auto& [mono, coef] : terms) {
        bool on = true;
        for (VarIndex v : mono) {
            if (((bits >> v) & 1ULL) == 0) {
                on = false;
                break;
            }
        }
        if (on) total += coef;
    }
    return total;
}

int QuboPolynomial::max_order() const {
    std::size_t order = 0;
    for (const auto& [mono, coef] : terms) order = std::max(order, mono.size());
    return static_cast<int>(order);
}

long long QuboPolynomial::max_abs_coefficient() const {
    long long best = 0;
    for (const auto& [mono, coef] : terms) best = std::max(best, std::llabs(coef));
    return best;
}

}  // namespace qaf
