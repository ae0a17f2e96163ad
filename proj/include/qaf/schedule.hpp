#pragma once

#include <string>
#include <vector>

namespace qaf {

/// Hamiltonian schedule lambda(s) on s in [0, 1].
///
/// The Fourier form is s + sum_m b_m sin(m pi s), which satisfies
/// lambda(0) = 0 and lambda(1) = 1 for every coefficient vector; the
/// linear and quadratic forms are the closed-form baselines s and s^2.
struct Schedule {
    enum class Form { Fourier, Linear, Quadratic };

    Form form = Form::Linear;
    std::vector<double> coeffs;  // b, Fourier only

    static Schedule linear() { return {Form::Linear, {}}; }
    static Schedule quadratic() { return {Form::Quadratic, {}}; }
    static Schedule fourier(std::vector<double> b) { return {Form::Fourier, std::move(b)}; }

    double evaluate(double s) const;

    /// Non-decreasing on the uniform grid {k / grid_size}, with tolerance
    /// -1e-12 on successive differences.
    bool is_monotone(int grid_size = 1024) const;

    std::string form_name() const;
};

/// Componentwise clamp of schedule coefficients to [-1, 1].
std::vector<double> clamp_coefficients(std::vector<double> b);

}  // namespace qaf
