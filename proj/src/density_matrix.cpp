#include "tmt/density_matrix.hpp"

#include <cmath>

namespace tmt {

namespace {

void require_hermitian(const TimeBinDensityMatrix& rho, const char* where, double tol = 1e-9) {
    if (hermiticity_defect(rho) > tol) {
        throw std::invalid_argument(std::string(where) + ": matrix is not Hermitian");
    }
}

}  // namespace

double hermiticity_defect(const TimeBinDensityMatrix& rho) {
    return (rho.elements - rho.elements.adjoint()).cwiseAbs().maxCoeff();
}

TimeBinDensityMatrix density_from_tmf(const TemporalModeFunction& tmf) {
    if (std::abs(tmf.norm_sq() - 1.0) > 1e-9) {
        throw std::invalid_argument("density_from_tmf: TMF is not normalized");
    }
    const Eigen::VectorXcd& phi = tmf.amplitudes;
    TimeBinDensityMatrix rho{tmf.grid, phi * phi.adjoint()};
    // Exact Hermiticity and real diagonal, independent of product round-off.
    const int n = rho.dim();
    for (int i = 0; i < n; ++i) {
        rho.elements(i, i) = std::norm(phi(i));
        for (int j = i + 1; j < n; ++j) {
            rho.elements(j, i) = std::conj(rho.elements(i, j));
        }
    }
    return rho;
}

double purity(const TimeBinDensityMatrix& rho) {
    require_hermitian(rho, "purity");
    const double tr = rho.elements.trace().real();
    if (std::abs(tr - 1.0) > 1e-6) {
        throw std::invalid_argument("purity: trace deviates from 1 by more than 1e-6");
    }
    return rho.elements.squaredNorm();
}

TimeBinDensityMatrix hermitize(const TimeBinDensityMatrix& rho) {
    return TimeBinDensityMatrix{rho.grid, 0.5 * (rho.elements + rho.elements.adjoint())};
}

PsdProjection project_psd(const TimeBinDensityMatrix& rho, double tol) {
    require_hermitian(rho, "project_psd");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.elements);
    if (es.info() != Eigen::Success) {
        throw ModelError("project_psd: eigendecomposition failed");
    }
    const double min_eig = es.eigenvalues().minCoeff();
    Eigen::VectorXd lam = es.eigenvalues().cwiseMax(0.0);
    const double tr = lam.sum();
    if (tr <= 0.0) {
        throw DegenerateInput("project_psd: no positive eigenvalue mass");
    }
    lam /= tr;
    TimeBinDensityMatrix out{rho.grid,
                             es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().adjoint()};
    out = hermitize(out);
    return PsdProjection{std::move(out), min_eig, min_eig < -tol};
}

TimeBinDensityMatrix trace_normalize(const TimeBinDensityMatrix& rho, bool* small_trace) {
    const double tr = rho.elements.trace().real();
    if (!(tr > 0.0)) {
        throw DegenerateInput("trace_normalize: non-positive trace");
    }
    if (small_trace) *small_trace = tr < 1e-6;
    return TimeBinDensityMatrix{rho.grid, rho.elements / tr};
}

double fidelity(const TimeBinDensityMatrix& rho, const TemporalModeFunction& tmf) {
    require_same_grid(rho.grid, tmf.grid, "fidelity");
    if (std::abs(tmf.norm_sq() - 1.0) > 1e-9) {
        throw std::invalid_argument("fidelity: TMF is not normalized");
    }
    const std::complex<double> f =
        (tmf.amplitudes.adjoint() * rho.elements * tmf.amplitudes)(0, 0);
    if (std::abs(f.imag()) > 1e-10) {
        throw ModelError("fidelity: imaginary part exceeds 1e-10, input not Hermitian enough");
    }
    return f.real();
}

}  // namespace tmt
