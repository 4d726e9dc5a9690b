#include "tmt/moment_kernels.hpp"

#include <stdexcept>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tmt {

SecondMoments accumulate_second_moments(std::int64_t n_samples, int n_bins,
                                        const TraceBlockFiller& fill_block) {
    if (n_samples < 1) {
        throw std::invalid_argument("accumulate_second_moments: need at least one trace");
    }
    const std::int64_t n_blocks = (n_samples + kMomentBlock - 1) / kMomentBlock;

    std::vector<Eigen::MatrixXd> s1(kMomentGroups, Eigen::MatrixXd::Zero(n_bins, n_bins));
    std::vector<Eigen::MatrixXd> s2(kMomentGroups, Eigen::MatrixXd::Zero(n_bins, n_bins));

#pragma omp parallel for schedule(dynamic, 1)
    for (int g = 0; g < kMomentGroups; ++g) {
        Eigen::MatrixXd block(kMomentBlock, n_bins);
        Eigen::MatrixXd sq(kMomentBlock, n_bins);
        for (std::int64_t b = g; b < n_blocks; b += kMomentGroups) {
            const std::int64_t first = b * kMomentBlock;
            const std::int64_t rows = std::min<std::int64_t>(kMomentBlock, n_samples - first);
            auto x = block.topRows(rows);
            fill_block(first, x);
            auto y = sq.topRows(rows);
            y = x.cwiseProduct(x);
            s1[g].selfadjointView<Eigen::Lower>().rankUpdate(x.transpose(), 1.0);
            s2[g].selfadjointView<Eigen::Lower>().rankUpdate(y.transpose(), 1.0);
        }
    }

    // Fixed pairwise combine, independent of how groups were scheduled.
    for (int step = 1; step < kMomentGroups; step *= 2) {
        for (int g = 0; g + step < kMomentGroups; g += 2 * step) {
            s1[g] += s1[g + step];
            s2[g] += s2[g + step];
        }
    }

    SecondMoments out;
    out.n = n_samples;
    out.sum_products = s1[0].selfadjointView<Eigen::Lower>();
    out.sum_sq_products = s2[0].selfadjointView<Eigen::Lower>();
    return out;
}

}  // namespace tmt
