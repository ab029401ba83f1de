#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "attocell/lattice.hpp"

using namespace attocell;

namespace {
double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }
} // namespace

TEST_CASE("horizontal_distance: hand values") {
    CHECK(horizontal_distance({1, 1}, {0.0, 0.0}, 1.0) == Catch::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(horizontal_distance({0, 0}, {0.3, 0.4}, 1.0) == Catch::Approx(0.5).epsilon(1e-14));
    const double expected = std::sqrt((0.1 - 4.0) * (0.1 - 4.0) + (-0.2 + 2.0) * (-0.2 + 2.0));
    CHECK(horizontal_distance({-2, 1}, {0.1, -0.2}, 2.0) == Catch::Approx(expected).epsilon(1e-14));
    CHECK(horizontal_distance({0, 0}, {0.0, 0.0}, 1.0) == 0.0);
}

TEST_CASE("channel_gain: axial value, monotonicity and scaling") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 1};
    // directly under the LED: G = A_pd / (pi h^2) for m = 1
    const double g0 = channel_gain({0, 0}, {0.0, 0.0}, spec, dp, sp.pd_area);
    CHECK(rel(g0, 1e-4 / (kPi * 9.0)) < 1e-13);
    // D = h doubles (D^2 + h^2), and the exponent is -(m+3)/2 = -2
    const LatticeSpec spec3{3.0, 3.0, 1};
    const double g3 = channel_gain({1, 0}, {0.0, 0.0}, spec3, dp, sp.pd_area);
    CHECK(rel(g3, 0.25 * g0) < 1e-13);
    // strictly decreasing in the ground distance
    const double gnear = channel_gain({1, 0}, {0.2, 0.0}, spec, dp, sp.pd_area);
    const double gfar = channel_gain({1, 0}, {-0.2, 0.0}, spec, dp, sp.pd_area);
    CHECK(gfar < gnear);
}

TEST_CASE("exact_moments: eight-interferer hand enumeration") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 1.0);
    const LatticeSpec spec{1.0, 1.0, 1};
    const auto mom = exact_moments({0.0, 0.0}, spec, sp, dp, 1);
    // D^2 + h^2 takes the values 2 (four times) and 3 (four times)
    const double bracket = 4.0 / 4.0 + 4.0 / 9.0;
    CHECK(rel(mom.mean, dp.mean_prefactor * bracket) < 1e-14);
    const double bracket_var = 4.0 / 16.0 + 4.0 / 81.0;
    CHECK(rel(mom.variance, dp.var_prefactor * bracket_var) < 1e-14);
    CHECK(mom.method == MomentMethod::exact_sum);
}

TEST_CASE("exact_moments: frozen N=1000 references at Table II scale") {
    SystemParams sp;
    const DerivedParams dp3 = derive(sp, 3.0);
    const auto m31 = exact_moments({0.0, 0.0}, {1.0, 3.0, 1}, sp, dp3, 1000);
    CHECK(rel(m31.mean, 7.71700017670486874e-05) < 1e-12);
    CHECK(rel(m31.variance, 2.21307856162867985e-11) < 1e-12);
    const auto m35 = exact_moments({0.0, 0.0}, {1.0, 3.0, 5}, sp, dp3, 1000);
    CHECK(rel(m35.mean, 1.39500207000346699e-06) < 1e-12);
    CHECK(rel(m35.variance, 5.83080850917597109e-14) < 1e-12);
}

TEST_CASE("exact_moments: thinning monotonicity and the K->inf limit") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    double prev_mean = 0.0, prev_var = 0.0;
    for (int k = 1; k <= 12; ++k) {
        const auto mom = exact_moments({0.0, 0.0}, {1.0, 3.0, k}, sp, dp, 300);
        if (k > 1) {
            CHECK(mom.mean < prev_mean);
            CHECK(mom.variance < prev_var);
        }
        prev_mean = mom.mean;
        prev_var = mom.variance;
    }
    CHECK(prev_mean < 1e-3 * dp.mean_prefactor);  // vanishes as the spacing grows
}

TEST_CASE("exact_moments: four-fold symmetry about the tagged LED") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 2};
    const ReceiverPos base{0.31, -0.17};
    const auto ref = exact_moments(base, spec, sp, dp, 200);
    for (const ReceiverPos p : {ReceiverPos{-base.x, base.y}, ReceiverPos{base.x, -base.y},
                                ReceiverPos{-base.x, -base.y}}) {
        const auto mom = exact_moments(p, spec, sp, dp, 200);
        CHECK(rel(mom.mean, ref.mean) < 1e-12);
        CHECK(rel(mom.variance, ref.variance) < 1e-12);
    }
}

TEST_CASE("exact_moments: cell corner sees more interference than the centre") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 1};
    const auto centre = exact_moments({0.0, 0.0}, spec, sp, dp, 400);
    const auto corner = exact_moments({0.5 - 1e-6, 0.5 - 1e-6}, spec, sp, dp, 400);
    CHECK(corner.mean > centre.mean);
}

TEST_CASE("exact_moments: truncation tail under N doubling") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 1};
    const auto a = exact_moments({0.0, 0.0}, spec, sp, dp, 1000);
    const auto b = exact_moments({0.0, 0.0}, spec, sp, dp, 2000);
    // the mean-sum terms decay like D^-4, so the 2D tail beyond radius N
    // shrinks like N^-2: doubling N from 1000 moves the mean by ~6e-6
    // relative, and the variance (D^-8 terms) by well under 1e-12
    CHECK(rel(a.mean, b.mean) < 1e-5);
    CHECK(rel(a.mean, b.mean) > 1e-7);
    CHECK(rel(a.variance, b.variance) < 1e-12);
}

TEST_CASE("exact_moments: variance vanishes for a single intensity level") {
    SystemParams sp;
    DerivedParams dp = derive(sp, 3.0);
    dp.var_prefactor = 0.0;  // T2 for M = 1
    const auto mom = exact_moments({0.0, 0.0}, {1.0, 3.0, 1}, sp, dp, 50);
    CHECK(mom.variance == 0.0);
}

TEST_CASE("lattice validation") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    CHECK_THROWS_AS(exact_moments({0.6, 0.0}, {1.0, 3.0, 1}, sp, dp, 10), std::invalid_argument);
    CHECK_NOTHROW(exact_moments({0.6, 0.0}, {1.0, 3.0, 2}, sp, dp, 10));  // inside the K=2 cell
    CHECK_THROWS_AS(exact_moments({0.0, 0.0}, {1.0, 3.0, 0}, sp, dp, 10), std::invalid_argument);
    CHECK_THROWS_AS(exact_moments({0.0, 0.0}, {1.0, 3.0, 1}, sp, dp, 0), std::invalid_argument);
    CHECK_THROWS_AS(horizontal_distance({0, 0}, {0.0, 0.0}, -1.0), std::invalid_argument);
}
