#include "support/dense_reference.hpp"

#include <cmath>
#include <cstdlib>

namespace dense {

EigenDecomposition jacobi_eigen(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-26) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    EigenDecomposition eig;
    eig.values.resize(n);
    eig.vectors.assign(n, std::vector<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        eig.values[k] = a[k][k];
        for (std::size_t i = 0; i < n; ++i) eig.vectors[k][i] = v[i][k];
    }
    return eig;
}

qaf::StateVector evolve_reference(const qaf::DiagonalProblem& problem,
                                  const std::function<double(double)>& lambda, double total_time,
                                  long long steps) {
    const std::size_t dim = std::size_t{1} << problem.n;
    qaf::StateVector psi = qaf::initial_state(problem.n);
    const double dt = total_time / static_cast<double>(steps);

    for (long long k = 0; k < steps; ++k) {
        const double lam = lambda((static_cast<double>(k) + 0.5) / static_cast<double>(steps));
        // H(s) = lambda * diag(E) - (1 - lambda) * ts * sum_i sigma_x_i
        std::vector<std::vector<double>> h(dim, std::vector<double>(dim, 0.0));
        for (std::size_t z = 0; z < dim; ++z) {
            h[z][z] = lam * problem.energies[z];
            for (int b = 0; b < problem.n; ++b)
                h[z][z ^ (std::size_t{1} << b)] = -(1.0 - lam) * problem.transverse_scale;
        }
        const EigenDecomposition eig = jacobi_eigen(h);
        // psi <- U exp(-i Lambda dt) U^T psi
        qaf::StateVector next(dim, {0.0, 0.0});
        for (std::size_t m = 0; m < dim; ++m) {
            std::complex<double> amp{0.0, 0.0};
            for (std::size_t z = 0; z < dim; ++z) amp += eig.vectors[m][z] * psi[z];
            amp *= std::complex<double>(std::cos(eig.values[m] * dt), -std::sin(eig.values[m] * dt));
            for (std::size_t z = 0; z < dim; ++z) next[z] += eig.vectors[m][z] * amp;
        }
        psi = std::move(next);
    }
    return psi;
}

double fidelity(const qaf::StateVector& a, const qaf::StateVector& b) {
    std::complex<double> overlap{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
    return std::norm(overlap);
}

}  // namespace dense
