#include "tmt/tmf.hpp"

#include <cmath>
#include <numbers>

namespace tmt {

namespace detail {

Eigen::VectorXcd fix_global_phase(const Eigen::VectorXcd& v) {
    Eigen::Index peak = 0;
    v.cwiseAbs().maxCoeff(&peak);
    const std::complex<double> a = v(peak);
    const double mag = std::abs(a);
    if (mag == 0.0) return v;
    return v * (std::conj(a) / mag);
}

}  // namespace detail

namespace {

void check_finite(const Eigen::VectorXcd& v, const char* where) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string(where) + ": non-finite amplitude");
    }
}

TemporalModeFunction finish(const TimeGrid& grid, Eigen::VectorXcd v, const char* where) {
    check_finite(v, where);
    const double n2 = v.squaredNorm();
    if (n2 <= 0.0) {
        throw DegenerateInput(std::string(where) + ": all-zero amplitude vector");
    }
    v = detail::fix_global_phase(v) / std::sqrt(n2);
    return TemporalModeFunction{grid, std::move(v)};
}

}  // namespace

TemporalModeFunction normalize(const TemporalModeFunction& tmf) {
    check_finite(tmf.amplitudes, "normalize");
    const double n2 = tmf.amplitudes.squaredNorm();
    if (n2 <= 0.0) {
        throw DegenerateInput("normalize: zero vector");
    }
    return TemporalModeFunction{tmf.grid, tmf.amplitudes / std::sqrt(n2)};
}

TemporalModeFunction rabi_tmf(double omega_c, double gamma13, double gamma12,
                              const TimeGrid& grid) {
    if (gamma13 < 0.0 || gamma12 < 0.0) {
        throw std::invalid_argument("rabi_tmf: dephasing rates must be non-negative");
    }
    const double dg = gamma13 - gamma12;
    if (!(omega_c * omega_c > dg * dg)) {
        throw RegimeError("rabi_tmf: overdamped parameters, need omega_c^2 > (gamma13-gamma12)^2");
    }
    const double gamma_e = 0.5 * (gamma13 + gamma12);
    const double omega_e = std::sqrt(omega_c * omega_c - dg * dg);

    Eigen::VectorXcd v(grid.n_bins);
    for (int i = 0; i < grid.n_bins; ++i) {
        const double tau = grid.bin_center(i);
        v(i) = tau < 0.0 ? 0.0 : std::exp(-gamma_e * tau) * std::sin(0.5 * omega_e * tau);
    }
    if (v.squaredNorm() <= 0.0) {
        throw DegenerateInput("rabi_tmf: grid misses the waveform support");
    }
    return finish(grid, std::move(v), "rabi_tmf");
}

TemporalModeFunction tabulated_tmf(const TimeGrid& grid,
                                   const std::vector<std::complex<double>>& samples) {
    if (static_cast<int>(samples.size()) != grid.n_bins) {
        throw std::invalid_argument("tabulated_tmf: sample count " + std::to_string(samples.size()) +
                                    " does not match grid bins " + std::to_string(grid.n_bins));
    }
    Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(samples.data(), grid.n_bins);
    return finish(grid, std::move(v), "tabulated_tmf");
}

TemporalModeFunction tmf_from_joint_spectrum(const JointSpectrum& spectrum,
                                             const TimeGrid& grid) {
    const Eigen::Index m = spectrum.detunings.size();
    if (m < 2 || spectrum.values.size() != m) {
        throw std::invalid_argument("tmf_from_joint_spectrum: need >= 2 matching samples");
    }
    const double d_omega = spectrum.detunings(1) - spectrum.detunings(0);
    if (!(d_omega > 0.0)) {
        throw std::invalid_argument("tmf_from_joint_spectrum: detunings must be strictly increasing");
    }
    for (Eigen::Index k = 1; k < m; ++k) {
        const double step = spectrum.detunings(k) - spectrum.detunings(k - 1);
        if (std::abs(step - d_omega) > 1e-9 * std::abs(d_omega)) {
            throw std::invalid_argument("tmf_from_joint_spectrum: detunings must be uniformly spaced");
        }
    }
    const double omega_max = spectrum.detunings.cwiseAbs().maxCoeff();
    if (omega_max > 0.0 && grid.dt > std::numbers::pi / omega_max) {
        throw AliasingError("tmf_from_joint_spectrum: grid dt undersamples the spectrum bandwidth");
    }

    const double scale = d_omega / std::sqrt(2.0 * std::numbers::pi);
    Eigen::VectorXcd v(grid.n_bins);
    for (int i = 0; i < grid.n_bins; ++i) {
        const double tau = grid.bin_center(i);
        std::complex<double> acc = 0.0;
        for (Eigen::Index k = 0; k < m; ++k) {
            acc += spectrum.values(k) *
                   std::polar(1.0, -spectrum.detunings(k) * tau);
        }
        v(i) = acc * scale;
    }
    return finish(grid, std::move(v), "tmf_from_joint_spectrum");
}

}  // namespace tmt
