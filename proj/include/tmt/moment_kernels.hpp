// moment_kernels.hpp -- blocked second-moment accumulation over trace sets.
//
// The hot path of the whole pipeline: given n traces x^(s) of length N,
// accumulate S1 = sum_s x x^T and S2 = sum_s (x.*x)(x.*x)^T. Traces are
// consumed in fixed blocks; block b is owned by group (b mod 64), each group
// accumulates its blocks in increasing order, and the 64 group sums are
// combined in a fixed pairwise tree. Groups run in parallel (OpenMP), and the
// result is bit-identical for any thread count.

#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace tmt {

struct SecondMoments {
    Eigen::MatrixXd sum_products;     // S1, symmetric N x N
    Eigen::MatrixXd sum_sq_products;  // S2, symmetric N x N
    std::int64_t n = 0;
};

inline constexpr std::int64_t kMomentBlock = 512;
inline constexpr int kMomentGroups = 64;

// fill_block(first, block) writes traces [first, first + block.rows()) into
// the rows of block; it must be safe to call concurrently for disjoint ranges.
using TraceBlockFiller =
    std::function<void(std::int64_t first, Eigen::Ref<Eigen::MatrixXd> block)>;

SecondMoments accumulate_second_moments(std::int64_t n_samples, int n_bins,
                                        const TraceBlockFiller& fill_block);

}  // namespace tmt
