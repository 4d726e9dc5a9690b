#include "tmt/simulate.hpp"

#include <cmath>

#include "tmt/moment_kernels.hpp"
#include "tmt/rng.hpp"

namespace tmt {

namespace {

void check_forward_inputs(const TimeBinDensityMatrix& rho, double eta, const char* where) {
    if (hermiticity_defect(rho) > 1e-9) {
        throw std::invalid_argument(std::string(where) + ": rho is not Hermitian");
    }
    if (std::abs(rho.elements.trace().real() - 1.0) > 1e-6) {
        throw std::invalid_argument(std::string(where) + ": rho trace is not 1");
    }
    if (eta < 0.0 || eta > 1.0) {
        throw std::invalid_argument(std::string(where) + ": eta must be in [0, 1]");
    }
}

void fill_gaussian_block(std::uint64_t seed, std::uint64_t detuning_index, std::int64_t first,
                         Eigen::Ref<Eigen::MatrixXd> z) {
    const int n_bins = static_cast<int>(z.cols());
    for (std::int64_t r = 0; r < z.rows(); ++r) {
        CounterRng rng(derive_stream_key(seed, detuning_index, static_cast<std::uint64_t>(first + r)));
        for (int i = 0; i < n_bins; ++i) {
            z(r, i) = rng.next_normal();
        }
    }
}

AutocorrelationMatrix moments_to_autocorr(const SecondMoments& m, const TimeGrid& grid,
                                          double delta_omega) {
    const int n_bins = static_cast<int>(m.sum_products.rows());
    const double n = static_cast<double>(m.n);
    Eigen::MatrixXd mean = m.sum_products / n;
    Eigen::MatrixXd values = mean;
    values.diagonal().array() -= 0.5;

    Eigen::MatrixXd se(n_bins, n_bins);
    const double denom = n * (n - 1.0);
    for (int j = 0; j < n_bins; ++j) {
        for (int i = 0; i < n_bins; ++i) {
            const double var_sum = m.sum_sq_products(i, j) - n * mean(i, j) * mean(i, j);
            se(i, j) = std::sqrt(std::max(0.0, var_sum / denom));
        }
    }
    return AutocorrelationMatrix{grid, delta_omega, std::move(values), std::move(se), m.n};
}

}  // namespace

AutocorrelationMatrix autocorr_exact(const TimeBinDensityMatrix& rho, double delta_omega,
                                     double eta) {
    check_forward_inputs(rho, eta, "autocorr_exact");
    const int n = rho.dim();
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double dt_ij = rho.grid.bin_center(i) - rho.grid.bin_center(j);
            const std::complex<double> r = rho.elements(i, j);
            const double v =
                eta * (r.real() * std::cos(delta_omega * dt_ij) + r.imag() * std::sin(delta_omega * dt_ij));
            a(i, j) = v;
            a(j, i) = v;
        }
    }
    return AutocorrelationMatrix{rho.grid, delta_omega, std::move(a), std::nullopt, std::nullopt};
}

Eigen::MatrixXd covariance(const TimeBinDensityMatrix& rho, double delta_omega, double eta) {
    Eigen::MatrixXd sigma = autocorr_exact(rho, delta_omega, eta).values;
    sigma.diagonal().array() += 0.5;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-8) {
        throw ModelError("covariance: Sigma has eigenvalue below -1e-8, rho is not a valid state");
    }
    return sigma;
}

namespace detail {

Eigen::MatrixXd covariance_factor(const Eigen::MatrixXd& sigma) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sigma);
    if (es.info() != Eigen::Success) {
        throw ModelError("covariance_factor: eigen-factorization failed");
    }
    if (es.eigenvalues().minCoeff() < -1e-10) {
        throw ModelError("covariance_factor: eigenvalue below clipping threshold -1e-10");
    }
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * lam.cwiseSqrt().asDiagonal();
}

}  // namespace detail

QuadratureTraceSet sample_traces(const TimeBinDensityMatrix& rho, double delta_omega, double eta,
                                 std::int64_t n_samples, std::uint64_t seed,
                                 std::uint64_t detuning_index) {
    if (n_samples < 1) {
        throw std::invalid_argument("sample_traces: need n_samples >= 1");
    }
    const int n_bins = rho.dim();
    const Eigen::MatrixXd factor = detail::covariance_factor(covariance(rho, delta_omega, eta));
    const Eigen::MatrixXd factor_t = factor.transpose();

    QuadratureTraceSet out{rho.grid, delta_omega, Eigen::MatrixXd(n_samples, n_bins), seed, eta};
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t first = 0; first < n_samples; first += kMomentBlock) {
        const std::int64_t rows = std::min<std::int64_t>(kMomentBlock, n_samples - first);
        Eigen::MatrixXd z(rows, n_bins);
        fill_gaussian_block(seed, detuning_index, first, z);
        out.traces.middleRows(first, rows).noalias() = z * factor_t;
    }
    return out;
}

AutocorrelationMatrix estimate_autocorr(const QuadratureTraceSet& traces) {
    if (traces.n_samples() < 2) {
        throw std::invalid_argument("estimate_autocorr: need at least 2 traces");
    }
    const auto& t = traces.traces;
    const auto moments = accumulate_second_moments(
        traces.n_samples(), static_cast<int>(t.cols()),
        [&t](std::int64_t first, Eigen::Ref<Eigen::MatrixXd> block) {
            block = t.middleRows(first, block.rows());
        });
    return moments_to_autocorr(moments, traces.grid, traces.delta_omega);
}

std::vector<AutocorrelationMatrix> run_experiment(const TimeBinDensityMatrix& rho,
                                                  const std::vector<double>& detunings,
                                                  double eta,
                                                  std::optional<std::int64_t> n_samples,
                                                  std::uint64_t seed) {
    if (detunings.empty()) {
        throw std::invalid_argument("run_experiment: need at least one detuning");
    }
    std::vector<AutocorrelationMatrix> out;
    out.reserve(detunings.size());
    for (std::size_t k = 0; k < detunings.size(); ++k) {
        if (!n_samples) {
            out.push_back(autocorr_exact(rho, detunings[k], eta));
            continue;
        }
        if (*n_samples < 2) {
            throw std::invalid_argument("run_experiment: need n_samples >= 2");
        }
        // Streamed: generate each block on the fly, bit-identical to
        // estimate_autocorr(sample_traces(...)) without materializing traces.
        const Eigen::MatrixXd factor_t =
            detail::covariance_factor(covariance(rho, detunings[k], eta)).transpose();
        const int n_bins = rho.dim();
        const auto moments = accumulate_second_moments(
            *n_samples, n_bins,
            [&factor_t, seed, k, n_bins](std::int64_t first, Eigen::Ref<Eigen::MatrixXd> block) {
                Eigen::MatrixXd z(block.rows(), n_bins);
                fill_gaussian_block(seed, k, first, z);
                block.noalias() = z * factor_t;
            });
        out.push_back(moments_to_autocorr(moments, rho.grid, detunings[k]));
    }
    return out;
}

}  // namespace tmt
