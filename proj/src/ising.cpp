#include "qaf/ising.hpp"

#include <bit>
#include <stdexcept>

namespace qaf {

double IsingHamiltonian::energy(std::uint64_t bits) const {
    auto spin = [bits](int i) { return ((bits >> i) & 1ULL) ? -1.0 : 1.0; };
    double e = offset;
    for (int i = 0; i < n; ++i) e += fields[static_cast<std::size_t>(i)] * spin(i);
    for (const auto& c : couplings) e += c.value * spin(c.i) * spin(c.j);
    return e;
}

std::vector<double> IsingHamiltonian::diagonal() const {
    if (n > 30) throw std::invalid_argument("IsingHamiltonian::diagonal: too many qubits");
    const std::size_t dim = std::size_t{1} << n;
    // Gray-code walk keeps the fill at O(2^n * degree) with exact dyadic
    // increments.
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(n));
    for (const auto& c : couplings) {
        adj[static_cast<std::size_t>(c.i)].emplace_back(c.j, c.value);
        adj[static_cast<std::size_t>(c.j)].emplace_back(c.i, c.value);
    }
    std::vector<double> diag(dim);
    std::vector<double> spins(static_cast<std::size_t>(n), 1.0);
    double e = offset;
    for (int i = 0; i < n; ++i) e += fields[static_cast<std::size_t>(i)];
    for (const auto& c : couplings) e += c.value;
    std::uint64_t gray = 0;
    diag[0] = e;
    for (std::uint64_t k = 1; k < dim; ++k) {
        const int flip = std::countr_zero(k);
        const std::size_t fb = static_cast<std::size_t>(flip);
        double local = fields[fb];
        for (const auto& [j, v] : adj[fb]) local += v * spins[static_cast<std::size_t>(j)];
        e += -2.0 * spins[fb] * local;
        spins[fb] = -spins[fb];
        gray ^= (std::uint64_t{1} << flip);
        diag[gray] = e;
    }
    return diag;
}

IsingHamiltonian to_ising(const QuboPolynomial& poly) {
    if (poly.max_order() > 2) throw std::invalid_argument("to_ising: polynomial is not quadratic");
    IsingHamiltonian h;
    h.n = poly.num_vars;
    h.fields.assign(static_cast<std::size_t>(poly.num_vars), 0.0);
    h.offset = static_cast<double>(poly.constant);
    std::map<std::pair<int, int>, double> pair_terms;
    for (const auto& [mono, coef] : poly.terms) {
        const double a = static_cast<double>(coef);
        if (mono.size() == 1) {
            // a x = a/2 - (a/2) s
            h.offset += a / 2.0;
            h.fields[static_cast<std::size_t>(mono[0])] -= a / 2.0;
        } else {
            // a x y = a/4 (1 - s_i - s_j + s_i s_j)
            h.offset += a / 4.0;
            h.fields[static_cast<std::size_t>(mono[0])] -= a / 4.0;
            h.fields[static_cast<std::size_t>(mono[1])] -= a / 4.0;
            pair_terms[{mono[0], mono[1]}] += a / 4.0;
        }
    }
    h.couplings.reserve(pair_terms.size());
    for (const auto& [ij, v] : pair_terms)
        if (v != 0.0) h.couplings.push_back({ij.first, ij.second, v});
    return h;
}

GroundResult brute_force_ground(const IsingHamiltonian& h) {
    if (h.n > 24) throw std::invalid_argument("brute_force_ground: limited to 24 qubits");
    GroundResult result;
    result.computed = true;
    const std::uint64_t dim = std::uint64_t{1} << h.n;
    std::vector<std::vector<std::pair<int, double>>> adj(static_cast<std::size_t>(h.n));
    for (const auto& c : h.couplings) {
        adj[static_cast<std::size_t>(c.i)].emplace_back(c.j, c.value);
        adj[static_cast<std::size_t>(c.j)].emplace_back(c.i, c.value);
    }
    std::vector<double> spins(static_cast<std::size_t>(h.n), 1.0);
    double e = h.offset;
    for (int i = 0; i < h.n; ++i) e += h.fields[static_cast<std::size_t>(i)];
    for (const auto& c : h.couplings) e += c.value;

    double best = e;
    std::vector<std::uint64_t> states{0};
    std::uint64_t gray = 0;
    for (std::uint64_t k = 1; k < dim; ++k) {
        const int flip = std::countr_zero(k);
        const std::size_t fb = static_cast<std::size_t>(flip);
        double local = h.fields[fb];
        for (const auto& [j, v] : adj[fb]) local += v * spins[static_cast<std::size_t>(j)];
        e += -2.0 * spins[fb] * local;
        spins[fb] = -spins[fb];
        gray ^= (std::uint64_t{1} << flip);
        // All energies are exact multiples of 1/4, so equality is exact.
        if (e < best) {
            best = e;
            states.assign(1, gray);
        } else if (e == best) {
            states.push_back(gray);
        }
    }
    std::sort(states.begin(), states.end());
    result.min_energy = best;
    result.states = std::move(states);
    return result;
}

}  // namespace qaf
