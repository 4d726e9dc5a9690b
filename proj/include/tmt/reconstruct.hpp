// reconstruct.hpp -- temporal density matrix recovery from autocorrelation
// matrices at multiple LO detunings.
//
// The model A^(k)_ij = x cos(dw_k dt_ij) + y sin(dw_k dt_ij) decouples per
// element, so the global least-squares cost is minimized exactly by solving a
// 2x2 normal-equation system for every (i, j). Weights are 1/stderr^2 when
// every input matrix carries standard errors, uniform otherwise. Elements
// whose detuning phases are degenerate mod pi leave Im unidentifiable; those
// get Im = 0 and a diagnostic flag rather than a silent fit.

#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tmt/autocorr.hpp"
#include "tmt/density_matrix.hpp"

namespace tmt {

struct ReconstructionDiagnostics {
    std::vector<std::pair<int, int>> unidentifiable_im;  // upper-triangle (i, j)
    bool small_trace = false;
    bool heavily_clipped = false;       // only meaningful when PSD projection ran
    double psd_min_eigenvalue = 0.0;    // idem
    bool weighted = false;              // stderr weighting was used
};

struct AmplitudeProfile {
    Eigen::VectorXd raw;      // Re rho_ii, may dip below 0 under noise
    Eigen::VectorXd clipped;  // max(raw, 0)
};

struct PhaseProfile {
    Eigen::VectorXd theta;       // rad, in (-pi, pi], relative to bin m
    std::vector<bool> valid;     // false where |rho_jm| is below threshold
    int m = 0;
};

struct HomodyneProfile {
    Eigen::VectorXd amplitude_sq;   // A_jj
    Eigen::VectorXd re_phi_scaled;  // A_mj
    int m = 0;
};

struct ReconstructionOptions {
    bool psd_projection = false;
    double psd_tol = 0.05;
    double phase_threshold = 0.05;       // fraction of max |rho|
    std::optional<int> m;                // phase reference bin; empty = argmax rho_ii
};

struct ReconstructionResult {
    TimeBinDensityMatrix rho;
    double purity = 0.0;
    double raw_purity = 0.0;  // before PSD projection (== purity when projection is off)
    AmplitudeProfile amplitude;
    PhaseProfile phase;
    int m_row = 0;
    double residual = 0.0;  // RMS of A_hat - model over all fitted equations
    ReconstructionDiagnostics diagnostics;
};

// Single-element weighted LS of a_k = x cos(p_k) + y sin(p_k) via 2x2 normal
// equations; returns (x, y). When the system is degenerate (condition number
// above 1e8), y is fixed to 0 and *im_unidentifiable is set. Exposed so the
// brute-force oracle can cross-check it directly.
std::pair<double, double> solve_element(const std::vector<double>& a_values,
                                        const std::vector<double>& phases,
                                        const std::vector<double>& weights,
                                        bool* im_unidentifiable = nullptr);

// Per-element weighted least squares + Hermitization + trace normalization.
TimeBinDensityMatrix reconstruct_density(const std::vector<AutocorrelationMatrix>& data,
                                         const TimeGrid& grid,
                                         ReconstructionDiagnostics* diag = nullptr,
                                         double* residual = nullptr);

AmplitudeProfile extract_amplitude(const TimeBinDensityMatrix& rho);

// theta_j = arg(rho_jm) - arg(rho_mm) wrapped to (-pi, pi], masked where
// |rho_jm| <= threshold * max|rho|. m < 0 selects argmax rho_ii.
PhaseProfile extract_phase(const TimeBinDensityMatrix& rho, int m = -1,
                           double phase_threshold = 0.05);

// Homodyne-only shortcuts of the diagonal and row-m cuts; requires dw == 0.
HomodyneProfile homodyne_profile(const AutocorrelationMatrix& a, int m = -1);

double purity_report(const TimeBinDensityMatrix& rho);

// Full pipeline: solve, optional PSD projection, profiles, purity, residual.
ReconstructionResult reconstruct_full(const std::vector<AutocorrelationMatrix>& data,
                                      const TimeGrid& grid,
                                      const ReconstructionOptions& opt = {});

}  // namespace tmt
