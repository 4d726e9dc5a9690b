// serial_ref.hpp -- straight-line serial reference implementations of the
// hot kernels, kept for testing the blocked/OpenMP versions and for the
// benchmark target. Plain per-trace loops, no blocking, no Eigen products.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tmt/autocorr.hpp"
#include "tmt/density_matrix.hpp"
#include "tmt/moment_kernels.hpp"
#include "tmt/rng.hpp"

namespace tmt::serial {

inline AutocorrelationMatrix autocorr_exact(const TimeBinDensityMatrix& rho,
                                            double delta_omega, double eta) {
    const int n = rho.dim();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double dt_ij = rho.grid.bin_center(i) - rho.grid.bin_center(j);
            a(i, j) = eta * (rho.elements(i, j).real() * std::cos(delta_omega * dt_ij) +
                             rho.elements(i, j).imag() * std::sin(delta_omega * dt_ij));
        }
    }
    return AutocorrelationMatrix{rho.grid, delta_omega, std::move(a), std::nullopt, std::nullopt};
}

// Same streams as the production sampler: trace s uses the counter stream
// keyed by (seed, detuning_index, s).
inline Eigen::MatrixXd sample_traces(const Eigen::MatrixXd& factor, std::int64_t n_samples,
                                     std::uint64_t seed, std::uint64_t detuning_index) {
    const int n = static_cast<int>(factor.rows());
    Eigen::MatrixXd traces(n_samples, n);
    std::vector<double> z(n);
    for (std::int64_t s = 0; s < n_samples; ++s) {
        CounterRng rng(derive_stream_key(seed, detuning_index, static_cast<std::uint64_t>(s)));
        for (int i = 0; i < n; ++i) z[i] = rng.next_normal();
        for (int i = 0; i < n; ++i) {
            double x = 0.0;
            for (int j = 0; j < n; ++j) x += factor(i, j) * z[j];
            traces(s, i) = x;
        }
    }
    return traces;
}

inline SecondMoments second_moments(const Eigen::MatrixXd& traces) {
    const int n = static_cast<int>(traces.cols());
    SecondMoments m;
    m.n = traces.rows();
    m.sum_products = Eigen::MatrixXd::Zero(n, n);
    m.sum_sq_products = Eigen::MatrixXd::Zero(n, n);
    for (std::int64_t s = 0; s < traces.rows(); ++s) {
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double p = traces(s, i) * traces(s, j);
                m.sum_products(i, j) += p;
                m.sum_sq_products(i, j) += p * p;
            }
        }
    }
    return m;
}

}  // namespace tmt::serial
