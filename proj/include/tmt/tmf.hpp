// tmf.hpp -- temporal mode functions on a discrete time-bin grid.
//
// A TemporalModeFunction holds the complex amplitude phi(tau_i) per bin,
// normalized so sum_i |phi_i|^2 = 1 (bin sum, not integral). All amplitudes
// live in the frame rotating at the photon's central frequency; only the
// LO detuning is ever represented explicitly elsewhere.

#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "tmt/errors.hpp"
#include "tmt/time_grid.hpp"

namespace tmt {

struct TemporalModeFunction {
    TimeGrid grid;
    Eigen::VectorXcd amplitudes;  // size grid.n_bins

    double norm_sq() const { return amplitudes.squaredNorm(); }
};

// Sampled two-photon joint spectrum Phi(Omega); detunings in rad/ns,
// strictly increasing and uniformly spaced.
struct JointSpectrum {
    Eigen::VectorXd detunings;
    Eigen::VectorXcd values;
};

// Rescale to unit bin-sum norm. Phases are untouched.
TemporalModeFunction normalize(const TemporalModeFunction& tmf);

// Damped Rabi oscillation phi(tau) ~ exp(-gamma_e tau) sin(Omega_e tau / 2)
// for tau >= 0 (zero before the herald), with gamma_e = (gamma13 + gamma12)/2
// and Omega_e = sqrt(omega_c^2 - (gamma13 - gamma12)^2). Requires the
// underdamped regime omega_c^2 > (gamma13 - gamma12)^2.
TemporalModeFunction rabi_tmf(double omega_c, double gamma13, double gamma12,
                              const TimeGrid& grid);

// Wrap user-supplied samples (one per bin) as a normalized TMF.
TemporalModeFunction tabulated_tmf(const TimeGrid& grid,
                                   const std::vector<std::complex<double>>& samples);

// Discrete Fourier construction phi(tau_i) = (1/sqrt(2 pi)) sum_k Phi_k
// exp(-i Omega_k tau_i) dOmega, then normalized. The grid must resolve the
// spectrum: dt <= pi / max|Omega|.
TemporalModeFunction tmf_from_joint_spectrum(const JointSpectrum& spectrum,
                                             const TimeGrid& grid);

namespace detail {
// Gauge fix shared by the constructors: rotate the array so the amplitude at
// the bin of maximal |phi| is real and non-negative.
Eigen::VectorXcd fix_global_phase(const Eigen::VectorXcd& v);
}  // namespace detail

}  // namespace tmt
