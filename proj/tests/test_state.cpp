#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "helpers.hpp"
#include "tmt/density_matrix.hpp"

using namespace tmt;
using doctest::Approx;

namespace {

TimeBinDensityMatrix one_hot_density(const TimeGrid& grid, int k) {
    std::vector<std::complex<double>> s(grid.n_bins, 0.0);
    s[k] = 1.0;
    return density_from_tmf(tabulated_tmf(grid, s));
}

}  // namespace

TEST_CASE("density_from_tmf basics") {
    const TimeGrid grid = make_time_grid(0, 10, 4);
    SUBCASE("one-hot") {
        const auto rho = one_hot_density(grid, 2);
        CHECK(rho.elements(2, 2).real() == Approx(1.0));
        CHECK(rho.elements.cwiseAbs().sum() == Approx(1.0));
    }
    SUBCASE("equal two-bin superposition") {
        std::vector<std::complex<double>> s = {1.0, 1.0};
        const auto rho = density_from_tmf(tabulated_tmf(make_time_grid(0, 1, 2), s));
        for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
                CHECK(rho.elements(i, j).real() == Approx(0.5));
                CHECK(rho.elements(i, j).imag() == Approx(0.0));
            }
        }
    }
    SUBCASE("rejects unnormalized input") {
        TemporalModeFunction bad{grid, Eigen::VectorXcd::Ones(4)};
        CHECK_THROWS_AS(density_from_tmf(bad), std::invalid_argument);
    }
}

TEST_CASE("purity") {
    const TimeGrid grid = make_time_grid(0, 10, 6);
    SUBCASE("rank-1 is pure, property over random TMFs") {
        std::mt19937_64 gen(3);
        for (int t = 0; t < 50; ++t) {
            const auto rho = density_from_tmf(testing::random_tmf(gen, grid));
            // Oracle: explicit Tr(rho^2) by matrix product.
            const double tr_rho2 = (rho.elements * rho.elements).trace().real();
            CHECK(purity(rho) == Approx(1.0).epsilon(1e-12));
            CHECK(purity(rho) == Approx(tr_rho2).epsilon(1e-12));
        }
    }
    SUBCASE("equal mixture of orthogonal states") {
        const auto a = one_hot_density(grid, 0);
        const auto b = one_hot_density(grid, 3);
        const TimeBinDensityMatrix mix{grid, 0.5 * (a.elements + b.elements)};
        CHECK(purity(mix) == Approx(0.5));
    }
    SUBCASE("trace guard") {
        TimeBinDensityMatrix bad{grid, 2.0 * one_hot_density(grid, 0).elements};
        CHECK_THROWS_AS(purity(bad), std::invalid_argument);
    }
}

TEST_CASE("hermitize") {
    const TimeGrid grid = make_time_grid(0, 1, 2);
    SUBCASE("fixed point on Hermitian input") {
        const auto rho = one_hot_density(grid, 0);
        CHECK((hermitize(rho).elements - rho.elements).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("averages conjugate pairs") {
        TimeBinDensityMatrix m{grid, Eigen::Matrix2cd::Zero()};
        m.elements(0, 1) = {1.0, 2.0};
        m.elements(1, 0) = {3.0, -5.0};
        const auto h = hermitize(m);
        CHECK(h.elements(0, 1) == std::complex<double>(2.0, 3.5));
        CHECK(h.elements(1, 0) == std::complex<double>(2.0, -3.5));
    }
    SUBCASE("random matrix becomes Hermitian") {
        std::mt19937_64 gen(9);
        std::normal_distribution<double> normal;
        TimeBinDensityMatrix m{make_time_grid(0, 1, 8), Eigen::MatrixXcd(8, 8)};
        for (int i = 0; i < 8; ++i) {
            for (int j = 0; j < 8; ++j) m.elements(i, j) = {normal(gen), normal(gen)};
        }
        CHECK(hermiticity_defect(hermitize(m)) < 1e-15);
    }
}

TEST_CASE("project_psd") {
    SUBCASE("clips and renormalizes diag(1.1, -0.1)") {
        TimeBinDensityMatrix m{make_time_grid(0, 1, 2), Eigen::Matrix2cd::Zero()};
        m.elements(0, 0) = 1.1;
        m.elements(1, 1) = -0.1;
        const auto proj = project_psd(m);
        CHECK(proj.rho.elements(0, 0).real() == Approx(1.0));
        CHECK(std::abs(proj.rho.elements(1, 1).real()) < 1e-12);
        CHECK(proj.min_eigenvalue == Approx(-0.1));
        CHECK(proj.heavily_clipped);  // -0.1 < default tol -0.05
    }
    SUBCASE("PSD input is a fixed point") {
        std::mt19937_64 gen(13);
        const auto rho = density_from_tmf(testing::random_tmf(gen, make_time_grid(0, 1, 10)));
        const auto proj = project_psd(rho);
        CHECK((proj.rho.elements - rho.elements).cwiseAbs().maxCoeff() < 1e-12);
        CHECK_FALSE(proj.heavily_clipped);
    }
    SUBCASE("spectrum oracle on noisy rank-1 states") {
        std::mt19937_64 gen(29);
        std::normal_distribution<double> normal;
        const TimeGrid grid = make_time_grid(0, 1, 12);
        for (int t = 0; t < 20; ++t) {
            auto rho = density_from_tmf(testing::random_tmf(gen, grid));
            Eigen::MatrixXcd noise(12, 12);
            for (int i = 0; i < 12; ++i) {
                for (int j = 0; j < 12; ++j) noise(i, j) = {normal(gen), normal(gen)};
            }
            rho.elements += 0.005 * (noise + noise.adjoint());
            rho = trace_normalize(hermitize(rho));
            const auto proj = project_psd(rho);
            // Oracle: output spectrum must be max(lambda, 0) / sum(max(lambda, 0))
            // of the input spectrum, computed independently per matrix.
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> before(rho.elements);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> after(proj.rho.elements);
            Eigen::VectorXd expected = before.eigenvalues().cwiseMax(0.0);
            expected /= expected.sum();
            CHECK((after.eigenvalues() - expected).cwiseAbs().maxCoeff() < 1e-12);
            CHECK(proj.min_eigenvalue == Approx(before.eigenvalues().minCoeff()).epsilon(1e-12));
            CHECK(purity(proj.rho) == Approx(after.eigenvalues().squaredNorm()).epsilon(1e-9));
        }
    }
    SUBCASE("min eigenvalue after projection") {
        TimeBinDensityMatrix m{make_time_grid(0, 1, 3), Eigen::Matrix3cd::Zero()};
        m.elements.diagonal() << 0.9, 0.4, -0.3;
        const auto proj = project_psd(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(proj.rho.elements);
        CHECK(es.eigenvalues().minCoeff() >= -1e-12);
        CHECK(proj.rho.elements.trace().real() == Approx(1.0));
    }
}

TEST_CASE("trace_normalize") {
    const TimeGrid grid = make_time_grid(0, 1, 2);
    SUBCASE("halves a trace-2 matrix") {
        TimeBinDensityMatrix m{grid, 2.0 * Eigen::Matrix2cd::Identity()};
        CHECK(trace_normalize(m).elements(0, 0).real() == Approx(0.5));
    }
    SUBCASE("unit trace unchanged") {
        const auto rho = one_hot_density(grid, 1);
        CHECK((trace_normalize(rho).elements - rho.elements).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("tiny trace flagged") {
        TimeBinDensityMatrix m{grid, 1e-9 * Eigen::Matrix2cd::Identity()};
        bool small = false;
        const auto out = trace_normalize(m, &small);
        CHECK(small);
        CHECK(out.elements.trace().real() == Approx(1.0));
    }
    SUBCASE("non-positive trace") {
        TimeBinDensityMatrix m{grid, -Eigen::Matrix2cd::Identity()};
        CHECK_THROWS_AS(trace_normalize(m), DegenerateInput);
    }
}

TEST_CASE("fidelity") {
    const TimeGrid grid = make_time_grid(0, 10, 5);
    std::mt19937_64 gen(41);
    SUBCASE("self-fidelity of a pure state is 1") {
        const auto tmf = testing::random_tmf(gen, grid);
        CHECK(fidelity(density_from_tmf(tmf), tmf) == Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("orthogonal one-hot states") {
        std::vector<std::complex<double>> s(grid.n_bins, 0.0);
        s[1] = 1.0;
        const auto phi = tabulated_tmf(grid, s);
        CHECK(std::abs(fidelity(one_hot_density(grid, 3), phi)) < 1e-14);
    }
    SUBCASE("maximally mixed gives 1/N") {
        TimeBinDensityMatrix mixed{grid, Eigen::MatrixXcd::Identity(5, 5) / 5.0};
        CHECK(fidelity(mixed, testing::random_tmf(gen, grid)) == Approx(0.2).epsilon(1e-12));
    }
    SUBCASE("bounded in [0,1] for PSD unit-trace states") {
        for (int t = 0; t < 30; ++t) {
            const auto a = density_from_tmf(testing::random_tmf(gen, grid));
            const auto b = density_from_tmf(testing::random_tmf(gen, grid));
            const TimeBinDensityMatrix mix{grid, 0.6 * a.elements + 0.4 * b.elements};
            const double f = fidelity(mix, testing::random_tmf(gen, grid));
            CHECK(f >= -1e-10);
            CHECK(f <= 1.0 + 1e-10);
        }
    }
    SUBCASE("grid mismatch") {
        const auto rho = one_hot_density(grid, 0);
        const auto phi = testing::random_tmf(gen, make_time_grid(0, 5, 5));
        CHECK_THROWS_AS(fidelity(rho, phi), GridMismatch);
    }
}
