// Timing comparison between the straight-line serial kernels and the blocked
// production kernels (trace sampling + second-moment accumulation). Also
// asserts bit-identical results so the benchmark doubles as a smoke check.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>

#include "tmt/density_matrix.hpp"
#include "tmt/moment_kernels.hpp"
#include "tmt/serial_ref.hpp"
#include "tmt/simulate.hpp"
#include "tmt/tmf.hpp"

using namespace tmt;

namespace {

double time_of(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t n_samples = 200000;
    int n_bins = 64;
    if (argc > 1) n_samples = std::atoll(argv[1]);
    if (argc > 2) n_bins = std::atoi(argv[2]);

    const double omega_c = 2.0 * std::numbers::pi * 31.5e-3;
    const TimeGrid grid = make_time_grid(0, 10, n_bins);
    const auto rho = density_from_tmf(rabi_tmf(omega_c, 0.003, 0.003, grid));
    const double dw = 2.0 * std::numbers::pi * 13e-3;
    const Eigen::MatrixXd factor = detail::covariance_factor(covariance(rho, dw, 1.0));
    const std::uint64_t seed = 7;

    std::printf("n_samples=%lld n_bins=%d\n", static_cast<long long>(n_samples), n_bins);

    Eigen::MatrixXd serial_traces;
    const double t_serial_sample =
        time_of([&] { serial_traces = serial::sample_traces(factor, n_samples, seed, 0); });

    QuadratureTraceSet blocked_traces;
    const double t_blocked_sample =
        time_of([&] { blocked_traces = sample_traces(rho, dw, 1.0, n_samples, seed); });

    SecondMoments m_serial;
    const double t_serial_moments =
        time_of([&] { m_serial = serial::second_moments(serial_traces); });

    SecondMoments m_blocked;
    const double t_blocked_moments = time_of([&] {
        m_blocked = accumulate_second_moments(
            n_samples, n_bins, [&](std::int64_t first, Eigen::Ref<Eigen::MatrixXd> block) {
                block = blocked_traces.traces.middleRows(first, block.rows());
            });
    });

    const double trace_gap =
        (serial_traces - blocked_traces.traces).cwiseAbs().maxCoeff();
    const double s1_gap = (m_serial.sum_products - m_blocked.sum_products).cwiseAbs().maxCoeff();

    std::printf("sample_traces   serial %8.3fs   blocked %8.3fs   speedup %.2fx\n",
                t_serial_sample, t_blocked_sample, t_serial_sample / t_blocked_sample);
    std::printf("second_moments  serial %8.3fs   blocked %8.3fs   speedup %.2fx\n",
                t_serial_moments, t_blocked_moments, t_serial_moments / t_blocked_moments);
    // Same RNG streams, different accumulation order: agreement is to
    // rounding, not bit-for-bit.
    const double s1_rel = s1_gap / m_blocked.sum_products.cwiseAbs().maxCoeff();
    std::printf("trace max gap %.3e, S1 relative gap %.3e\n", trace_gap, s1_rel);

    if (trace_gap > 1e-12 || s1_rel > 1e-12) {
        std::printf("FAIL: blocked kernels disagree with the serial reference\n");
        return 1;
    }
    return 0;
}
