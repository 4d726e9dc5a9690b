// oracle.hpp -- independent brute-force checks used by tests and the CLI
// `oracle` subcommand. Deliberately naive scalar arithmetic; shares no solver
// or matrix code with the main modules.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "tmt/tmf.hpp"

namespace tmt::oracle {

// Exhaustive grid search of (x, y) over [-1, 1]^2 minimizing
// sum_k (a_k - x cos(dw_k dt) - y sin(dw_k dt))^2, followed by one refinement
// pass at 10x resolution around the best cell. Ties prefer values closer to 0.
inline std::pair<double, double> brute_force_element_fit(const std::vector<double>& a_values,
                                                         const std::vector<double>& detunings,
                                                         double dt_ij, int grid_steps) {
    if (grid_steps < 100) {
        throw std::invalid_argument("brute_force_element_fit: grid_steps must be >= 100");
    }
    if (a_values.size() != detunings.size() || a_values.empty()) {
        throw std::invalid_argument("brute_force_element_fit: mismatched inputs");
    }
    std::vector<double> cosines(a_values.size()), sines(a_values.size());
    for (std::size_t k = 0; k < detunings.size(); ++k) {
        cosines[k] = std::cos(detunings[k] * dt_ij);
        sines[k] = std::sin(detunings[k] * dt_ij);
    }
    auto cost = [&](double x, double y) {
        double c = 0.0;
        for (std::size_t k = 0; k < a_values.size(); ++k) {
            const double r = a_values[k] - x * cosines[k] - y * sines[k];
            c += r * r;
        }
        return c;
    };
    // Candidate coordinates ordered by |value| so strict-improvement search
    // breaks ties toward 0.
    auto axis = [](double center, double half_width, int steps) {
        std::vector<double> v;
        v.reserve(2 * steps + 1);
        for (int i = 0; i <= steps; ++i) {
            const double d = half_width * static_cast<double>(i) / steps;
            v.push_back(center + d);
            if (i > 0) v.push_back(center - d);
        }
        std::sort(v.begin(), v.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
        return v;
    };
    auto search = [&](double cx, double cy, double half_width, int steps) {
        const std::vector<double> xs = axis(cx, half_width, steps);
        const std::vector<double> ys = axis(cy, half_width, steps);
        double best_x = xs.front(), best_y = ys.front();
        double best = cost(best_x, best_y);
        for (double y : ys) {
            for (double x : xs) {
                const double c = cost(x, y);
                if (c < best) {
                    best = c;
                    best_x = x;
                    best_y = y;
                }
            }
        }
        return std::pair<double, double>{best_x, best_y};
    };
    const double coarse_step = 2.0 / grid_steps;
    auto [x0, y0] = search(0.0, 0.0, 1.0, grid_steps / 2);
    // Refine two coarse steps around the winner at 10x resolution; the wider
    // window keeps the true optimum covered when the coarse cell was off by
    // nearly a full step.
    return search(x0, y0, 2.0 * coarse_step, 20);
}

// Eq.-(6)-style forward value Re[phi_i conj(phi_j) e^{-i dw (t_i - t_j)}],
// computed scalar-by-scalar.
inline double direct_forward_check(const TemporalModeFunction& tmf, double delta_omega,
                                   int i, int j) {
    if (i < 0 || j < 0 || i >= tmf.grid.n_bins || j >= tmf.grid.n_bins) {
        throw std::out_of_range("direct_forward_check: bin index out of range");
    }
    const std::complex<double> phi_i = tmf.amplitudes(i);
    const std::complex<double> phi_j = tmf.amplitudes(j);
    const double dt_ij = tmf.grid.bin_center(i) - tmf.grid.bin_center(j);
    const std::complex<double> rho_ij = phi_i * std::conj(phi_j);
    return rho_ij.real() * std::cos(delta_omega * dt_ij) +
           rho_ij.imag() * std::sin(delta_omega * dt_ij);
}

}  // namespace tmt::oracle
