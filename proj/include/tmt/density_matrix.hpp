// density_matrix.hpp -- time-bin density matrix algebra.
//
// rho_ij = phi_i * conj(phi_j) for a pure temporal mode; Hermitian, unit
// trace. Purity is computed as sum_ij |rho_ij|^2, which equals Tr(rho^2)
// for Hermitian rho without touching an eigensolver.

#pragma once

#include <Eigen/Dense>

#include "tmt/errors.hpp"
#include "tmt/time_grid.hpp"
#include "tmt/tmf.hpp"

namespace tmt {

struct TimeBinDensityMatrix {
    TimeGrid grid;
    Eigen::MatrixXcd elements;  // n_bins x n_bins

    int dim() const { return static_cast<int>(elements.rows()); }
};

struct PsdProjection {
    TimeBinDensityMatrix rho;
    double min_eigenvalue = 0.0;  // of the input, before clipping
    bool heavily_clipped = false;
};

// Rank-1 rho from a normalized TMF.
TimeBinDensityMatrix density_from_tmf(const TemporalModeFunction& tmf);

// Tr(rho^2) for Hermitian unit-trace rho; throws if |Tr - 1| > 1e-6.
double purity(const TimeBinDensityMatrix& rho);

// (rho + rho^dagger) / 2.
TimeBinDensityMatrix hermitize(const TimeBinDensityMatrix& rho);

// Clip negative eigenvalues to zero and renormalize the trace. The result is
// flagged heavily_clipped when the most negative input eigenvalue is below
// -tol (trace units); that usually means under-sampled statistics upstream.
PsdProjection project_psd(const TimeBinDensityMatrix& rho, double tol = 0.05);

// rho / Tr(rho). small_trace (when provided) is set when Tr < 1e-6.
TimeBinDensityMatrix trace_normalize(const TimeBinDensityMatrix& rho,
                                     bool* small_trace = nullptr);

// <phi|rho|phi>; real part returned, imaginary part must vanish.
double fidelity(const TimeBinDensityMatrix& rho, const TemporalModeFunction& tmf);

// Max |rho_ij - conj(rho_ji)| over all elements.
double hermiticity_defect(const TimeBinDensityMatrix& rho);

}  // namespace tmt
