// time_grid.hpp -- uniform time-bin axis. Times in ns throughout the core.

#pragma once

#include <stdexcept>
#include <string>

#include "tmt/errors.hpp"

namespace tmt {

struct TimeGrid {
    double t_start = 0.0;  // center of bin 0, ns
    double dt = 1.0;       // bin width, ns
    int n_bins = 2;

    double bin_center(int i) const { return t_start + static_cast<double>(i) * dt; }
    double span() const { return static_cast<double>(n_bins - 1) * dt; }

    friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
        return a.t_start == b.t_start && a.dt == b.dt && a.n_bins == b.n_bins;
    }
};

inline TimeGrid make_time_grid(double t_start, double dt, int n_bins) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("make_time_grid: dt must be positive, got " + std::to_string(dt));
    }
    if (n_bins < 2) {
        throw std::invalid_argument("make_time_grid: need at least 2 bins, got " + std::to_string(n_bins));
    }
    return TimeGrid{t_start, dt, n_bins};
}

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!(a == b)) {
        throw GridMismatch(std::string(where) + ": operands live on different time grids");
    }
}

}  // namespace tmt
