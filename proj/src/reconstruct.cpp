#include "tmt/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace tmt {

namespace {

constexpr double kConditionLimit = 1e8;

double wrap_phase(double theta) {
    // (-pi, pi]
    theta = std::remainder(theta, 2.0 * std::numbers::pi);
    if (theta <= -std::numbers::pi) theta += 2.0 * std::numbers::pi;
    return theta;
}

struct ElementFit {
    double re = 0.0;
    double im = 0.0;
    bool im_unidentifiable = false;
};

// Weighted LS of a_k = x cos(p_k) + y sin(p_k); fix_im forces y = 0.
ElementFit fit_element(const std::vector<double>& a, const std::vector<double>& phase,
                       const std::vector<double>& w, bool fix_im) {
    double scc = 0.0, sss = 0.0, scs = 0.0, sca = 0.0, ssa = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double c = std::cos(phase[k]);
        const double s = std::sin(phase[k]);
        scc += w[k] * c * c;
        sss += w[k] * s * s;
        scs += w[k] * c * s;
        sca += w[k] * c * a[k];
        ssa += w[k] * s * a[k];
    }
    ElementFit out;
    if (!fix_im) {
        // 2x2 symmetric normal equations; condition from the eigenvalue ratio.
        const double tr = scc + sss;
        const double det = scc * sss - scs * scs;
        const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        const double lam_max = 0.5 * (tr + disc);
        const double lam_min = 0.5 * (tr - disc);
        if (lam_min > 0.0 && lam_max / lam_min < kConditionLimit) {
            out.re = (sss * sca - scs * ssa) / det;
            out.im = (scc * ssa - scs * sca) / det;
            return out;
        }
        out.im_unidentifiable = true;
    }
    out.re = scc > 0.0 ? sca / scc : 0.0;
    out.im = 0.0;
    return out;
}

}  // namespace

std::pair<double, double> solve_element(const std::vector<double>& a_values,
                                        const std::vector<double>& phases,
                                        const std::vector<double>& weights,
                                        bool* im_unidentifiable) {
    if (a_values.size() != phases.size() || a_values.size() != weights.size() ||
        a_values.empty()) {
        throw std::invalid_argument("solve_element: mismatched inputs");
    }
    const ElementFit fit = fit_element(a_values, phases, weights, /*fix_im=*/false);
    if (im_unidentifiable) *im_unidentifiable = fit.im_unidentifiable;
    return {fit.re, fit.im};
}

TimeBinDensityMatrix reconstruct_density(const std::vector<AutocorrelationMatrix>& data,
                                         const TimeGrid& grid,
                                         ReconstructionDiagnostics* diag, double* residual) {
    if (data.empty()) {
        throw std::invalid_argument("reconstruct_density: no input matrices");
    }
    for (const auto& a : data) {
        require_same_grid(a.grid, grid, "reconstruct_density");
    }
    const std::size_t n_sets = data.size();
    const bool weighted = std::all_of(data.begin(), data.end(),
                                      [](const auto& a) { return a.std_error.has_value(); });
    if (diag) {
        *diag = ReconstructionDiagnostics{};
        diag->weighted = weighted;
    }

    const int n = grid.n_bins;
    Eigen::MatrixXcd rho_hat(n, n);
    // Per-row partials summed in index order afterwards, so the residual is
    // bit-identical for any thread count.
    Eigen::VectorXd row_sq_residual = Eigen::VectorXd::Zero(n);

    std::vector<double> a_k(n_sets), phase_k(n_sets), w_k(n_sets);
#pragma omp parallel for schedule(dynamic, 4) firstprivate(a_k, phase_k, w_k)
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            const double dt_ij = grid.bin_center(i) - grid.bin_center(j);
            for (std::size_t k = 0; k < n_sets; ++k) {
                a_k[k] = data[k].values(i, j);
                phase_k[k] = data[k].delta_omega * dt_ij;
                if (weighted) {
                    const double se = (*data[k].std_error)(i, j);
                    w_k[k] = 1.0 / std::max(se * se, 1e-30);
                } else {
                    w_k[k] = 1.0;
                }
            }
            const ElementFit fit = fit_element(a_k, phase_k, w_k, /*fix_im=*/i == j);
            rho_hat(i, j) = {fit.re, fit.im};
            rho_hat(j, i) = {fit.re, -fit.im};
            if (fit.im_unidentifiable && diag) {
#pragma omp critical(tmt_reconstruct_diag)
                diag->unidentifiable_im.emplace_back(i, j);
            }
            for (std::size_t k = 0; k < n_sets; ++k) {
                const double model = fit.re * std::cos(phase_k[k]) + fit.im * std::sin(phase_k[k]);
                const double r = a_k[k] - model;
                row_sq_residual(i) += r * r;
            }
        }
    }
    if (residual) {
        const auto n_equations =
            static_cast<double>(n_sets) * (static_cast<double>(n) * (n + 1) / 2.0);
        *residual = std::sqrt(row_sq_residual.sum() / n_equations);
    }
    if (diag) {
        std::sort(diag->unidentifiable_im.begin(), diag->unidentifiable_im.end());
    }

    TimeBinDensityMatrix rho = hermitize(TimeBinDensityMatrix{grid, std::move(rho_hat)});
    bool small_trace = false;
    rho = trace_normalize(rho, &small_trace);
    if (diag) diag->small_trace = small_trace;
    return rho;
}

AmplitudeProfile extract_amplitude(const TimeBinDensityMatrix& rho) {
    if (hermiticity_defect(rho) > 1e-9) {
        throw std::invalid_argument("extract_amplitude: rho is not Hermitian");
    }
    AmplitudeProfile out;
    out.raw = rho.elements.diagonal().real();
    out.clipped = out.raw.cwiseMax(0.0);
    return out;
}

PhaseProfile extract_phase(const TimeBinDensityMatrix& rho, int m, double phase_threshold) {
    if (hermiticity_defect(rho) > 1e-9) {
        throw std::invalid_argument("extract_phase: rho is not Hermitian");
    }
    const int n = rho.dim();
    if (m >= n) {
        throw std::invalid_argument("extract_phase: m out of range");
    }
    if (m < 0) {
        Eigen::Index peak = 0;
        rho.elements.diagonal().real().maxCoeff(&peak);
        m = static_cast<int>(peak);
    }
    const double cutoff = phase_threshold * rho.elements.cwiseAbs().maxCoeff();
    const double ref = std::arg(rho.elements(m, m));

    PhaseProfile out;
    out.m = m;
    out.theta = Eigen::VectorXd::Zero(n);
    out.valid.assign(n, false);
    int n_valid = 0;
    for (int j = 0; j < n; ++j) {
        const std::complex<double> r = rho.elements(j, m);
        if (std::abs(r) <= cutoff) continue;
        out.theta(j) = wrap_phase(std::arg(r) - ref);
        out.valid[j] = true;
        ++n_valid;
    }
    if (n_valid == 0) {
        throw EmptyPhaseError("extract_phase: every element is below the phase threshold");
    }
    return out;
}

HomodyneProfile homodyne_profile(const AutocorrelationMatrix& a, int m) {
    if (a.delta_omega != 0.0) {
        throw std::invalid_argument("homodyne_profile: requires a delta_omega = 0 dataset");
    }
    const int n = static_cast<int>(a.values.rows());
    if (m >= n) {
        throw std::invalid_argument("homodyne_profile: m out of range");
    }
    if (m < 0) {
        Eigen::Index peak = 0;
        a.values.diagonal().maxCoeff(&peak);
        m = static_cast<int>(peak);
    }
    HomodyneProfile out;
    out.m = m;
    out.amplitude_sq = a.values.diagonal();
    out.re_phi_scaled = a.values.row(m).transpose();
    return out;
}

double purity_report(const TimeBinDensityMatrix& rho) { return purity(rho); }

ReconstructionResult reconstruct_full(const std::vector<AutocorrelationMatrix>& data,
                                      const TimeGrid& grid, const ReconstructionOptions& opt) {
    ReconstructionResult res;
    res.rho = reconstruct_density(data, grid, &res.diagnostics, &res.residual);
    res.raw_purity = purity(res.rho);
    if (opt.psd_projection) {
        PsdProjection proj = project_psd(res.rho, opt.psd_tol);
        res.rho = std::move(proj.rho);
        res.diagnostics.heavily_clipped = proj.heavily_clipped;
        res.diagnostics.psd_min_eigenvalue = proj.min_eigenvalue;
    }
    res.purity = purity(res.rho);
    res.amplitude = extract_amplitude(res.rho);
    res.phase = extract_phase(res.rho, opt.m.value_or(-1), opt.phase_threshold);
    res.m_row = res.phase.m;
    return res;
}

}  // namespace tmt
