// simulate.hpp -- forward model and finite-sample quadrature generation.
//
// The forward map is A_ij = eta * (Re rho_ij cos(dw (t_i - t_j)) +
// Im rho_ij sin(dw (t_i - t_j))); measured traces have covariance
// Sigma = I/2 + A. Sampling is Gaussian with exactly this covariance:
// the reconstruction consumes only second moments, for which Gaussian
// statistics are sufficient (full photon statistics are a non-goal).

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tmt/autocorr.hpp"
#include "tmt/density_matrix.hpp"

namespace tmt {

// Exact (noiseless) reduced autocorrelation matrix; exactly symmetric.
AutocorrelationMatrix autocorr_exact(const TimeBinDensityMatrix& rho,
                                     double delta_omega, double eta);

// Sigma = I/2 + A; throws ModelError if the minimum eigenvalue is < -1e-8
// (valid rho and eta in [0,1] guarantee PSD analytically).
Eigen::MatrixXd covariance(const TimeBinDensityMatrix& rho, double delta_omega,
                           double eta);

// n_samples zero-mean Gaussian traces with covariance Sigma, via a symmetric
// eigen-factorization with eigenvalue clipping at -1e-10. Trace s draws from
// the counter stream keyed by (seed, detuning_index, s), so output is
// bit-deterministic regardless of scheduling.
QuadratureTraceSet sample_traces(const TimeBinDensityMatrix& rho, double delta_omega,
                                 double eta, std::int64_t n_samples, std::uint64_t seed,
                                 std::uint64_t detuning_index = 0);

// A_hat_ij = (1/n) sum_s X_i X_j - delta_ij / 2, with per-element standard
// errors (sample sd of the products / sqrt(n)). Requires n >= 2.
AutocorrelationMatrix estimate_autocorr(const QuadratureTraceSet& traces);

// One simulated campaign: for each detuning k, draw traces keyed by (seed, k)
// and estimate A_hat^(k). n_samples == nullopt selects the exact (noiseless)
// matrices instead of sampling. Traces are streamed, never materialized.
std::vector<AutocorrelationMatrix> run_experiment(const TimeBinDensityMatrix& rho,
                                                  const std::vector<double>& detunings,
                                                  double eta,
                                                  std::optional<std::int64_t> n_samples,
                                                  std::uint64_t seed);

namespace detail {
// L with L L^T = Sigma (eigen-factorization, eigenvalues clipped at -1e-10).
Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma);
}  // namespace detail

}  // namespace tmt
