// autocorr.hpp -- measured-data value types shared by simulate and reconstruct.

#pragma once

#include <cstdint>
#include <optional>

#include <Eigen/Dense>

#include "tmt/time_grid.hpp"

namespace tmt {

// Reduced autocorrelation matrix A for one LO detuning:
// <X_i X_j> = delta_ij / 2 + A_ij. n_samples is empty for exact (noiseless)
// matrices; std_error accompanies sampled ones.
struct AutocorrelationMatrix {
    TimeGrid grid;
    double delta_omega = 0.0;  // rad/ns
    Eigen::MatrixXd values;    // real symmetric N x N
    std::optional<Eigen::MatrixXd> std_error;
    std::optional<std::int64_t> n_samples;  // nullopt == exact

    bool exact() const { return !n_samples.has_value(); }
};

// Triggered quadrature traces, one row per trigger. Vacuum variance is 1/2.
struct QuadratureTraceSet {
    TimeGrid grid;
    double delta_omega = 0.0;
    Eigen::MatrixXd traces;  // n_samples x n_bins
    std::uint64_t seed = 0;
    double eta = 1.0;

    std::int64_t n_samples() const { return traces.rows(); }
};

}  // namespace tmt
