// Shared test utilities: random state generation and closed-form references.

#pragma once

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "tmt/density_matrix.hpp"
#include "tmt/tmf.hpp"

namespace tmt::testing {

inline TemporalModeFunction random_tmf(std::mt19937_64& gen, const TimeGrid& grid) {
    std::normal_distribution<double> normal;
    std::vector<std::complex<double>> samples(grid.n_bins);
    for (auto& s : samples) s = {normal(gen), normal(gen)};
    return tabulated_tmf(grid, samples);
}

// Reference damped-sinusoid parameters: Omega_c = 2 pi x 31.5 MHz in rad/ns.
inline constexpr double kOmegaC = 2.0 * std::numbers::pi * 31.5e-3;

inline double rabi_gamma_e(double g13, double g12) { return 0.5 * (g13 + g12); }
inline double rabi_omega_e(double omega_c, double g13, double g12) {
    return std::sqrt(omega_c * omega_c - (g13 - g12) * (g13 - g12));
}

// Unnormalized closed form, evaluated independently of the tmf module.
inline double rabi_waveform(double tau, double omega_c, double g13, double g12) {
    if (tau < 0.0) return 0.0;
    return std::exp(-rabi_gamma_e(g13, g12) * tau) *
           std::sin(0.5 * rabi_omega_e(omega_c, g13, g12) * tau);
}

// The standard 8-detuning measurement set (MHz), as delta_omega = 2 pi nu in rad/ns.
inline std::vector<double> reference_detunings() {
    const double f = 2.0 * std::numbers::pi * 1e-3;
    return {-10 * f, -5 * f, 0 * f, 3 * f, 8 * f, 13 * f, 18 * f, 23 * f};
}

}  // namespace tmt::testing
