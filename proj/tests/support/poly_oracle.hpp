#pragma once

// Test-only polynomial expander kept independent of the library's QUBO
// code path: terms are keyed by sorted variable-name sets and expanded
// by brute multiplication with the idempotence rule.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

struct Term {
    long long coef;
    std::vector<std::string> vars;  // may repeat; canonicalized on use
};

using Expansion = std::map<std::set<std::string>, long long>;

/// Expands (sum of terms)^2 with x^2 = x.
inline Expansion square_expression(const std::vector<Term>& expr) {
    Expansion out;
    for (const auto& a : expr)
        for (const auto& b : expr) {
            std::set<std::string> key(a.vars.begin(), a.vars.end());
            key.insert(b.vars.begin(), b.vars.end());
            out[key] += a.coef * b.coef;
        }
    for (auto it = out.begin(); it != out.end();)
        it = it->second == 0 ? out.erase(it) : std::next(it);
    return out;
}

}  // namespace oracle
