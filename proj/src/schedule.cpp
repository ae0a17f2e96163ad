#include "qaf/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qaf {

double Schedule::evaluate(double s) const {
    if (s < 0.0 || s > 1.0) throw std::domain_error("Schedule::evaluate: s outside [0, 1]");
    switch (form) {
        case Form::Linear:
            return s;
        case Form::Quadratic:
            return s * s;
        case Form::Fourier: {
            double value = s;
            for (std::size_t m = 0; m < coeffs.size(); ++m)
                value += coeffs[m] * std::sin(static_cast<double>(m + 1) * M_PI * s);
            return value;
        }
    }
    return s;
}

bool Schedule::is_monotone(int grid_size) const {
    if (grid_size < 2) throw std::invalid_argument("Schedule::is_monotone: grid_size must be >= 2");
    double prev = evaluate(0.0);
    for (int k = 1; k <= grid_size; ++k) {
        const double value = evaluate(static_cast<double>(k) / grid_size);
        if (value - prev < -1e-12) return false;
        prev = value;
    }
    return true;
}

std::string Schedule::form_name() const {
    switch (form) {
        case Form::Linear: return "linear";
        case Form::Quadratic: return "quadratic";
        case Form::Fourier: return "fourier";
    }
    return "linear";
}

std::vector<double> clamp_coefficients(std::vector<double> b) {
    for (double& v : b) v = std::clamp(v, -1.0, 1.0);
    return b;
}

}  // namespace qaf
