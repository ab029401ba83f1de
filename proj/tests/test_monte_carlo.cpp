#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdlib>

#include "attocell/link.hpp"
#include "attocell/monte_carlo.hpp"

using namespace attocell;

TEST_CASE("simulate: identical config and seed give identical reports") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 5};
    McConfig mc;
    mc.n_slots = 20000;
    mc.seed = 42;
    mc.oracle_radius = 10;
    const auto a = simulate({0.0, 0.0}, spec, sp, dp, mc);
    const auto b = simulate({0.0, 0.0}, spec, sp, dp, mc);
    CHECK(a.emp_mean == b.emp_mean);
    CHECK(a.emp_var == b.emp_var);
    CHECK(a.emp_ser == b.emp_ser);
    mc.seed = 43;
    const auto c = simulate({0.0, 0.0}, spec, sp, dp, mc);
    CHECK(a.emp_mean != c.emp_mean);
}

TEST_CASE("simulate: report does not depend on the worker count") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 5};
    McConfig mc;
    mc.n_slots = 30000;
    mc.seed = 7;
    mc.oracle_radius = 8;
    setenv("ATTOCELL_THREADS", "1", 1);
    const auto serial = simulate({0.0, 0.0}, spec, sp, dp, mc);
    setenv("ATTOCELL_THREADS", "4", 1);
    const auto parallel = simulate({0.0, 0.0}, spec, sp, dp, mc);
    unsetenv("ATTOCELL_THREADS");
    CHECK(serial.emp_mean == parallel.emp_mean);
    CHECK(serial.emp_var == parallel.emp_var);
    CHECK(serial.emp_ser == parallel.emp_ser);
}

TEST_CASE("simulate: interference moments match the lattice sums") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 5};
    McConfig mc;
    mc.n_slots = 400000;
    mc.seed = 2024;
    mc.oracle_radius = 25;
    const auto rep = simulate({0.0, 0.0}, spec, sp, dp, mc);
    const auto truth = exact_moments({0.0, 0.0}, spec, sp, dp, mc.oracle_radius);
    CHECK(std::fabs(rep.emp_mean - truth.mean) < 4.0 * rep.stderr_mean);
    CHECK(std::fabs(rep.emp_var - truth.variance) < 0.05 * truth.variance);
}

TEST_CASE("simulate: binary PAM without interference reproduces the Q tail") {
    SystemParams sp;
    sp.pam_order = 2;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 1};
    McConfig mc;
    mc.n_slots = 500000;
    mc.seed = 11;
    mc.oracle_radius = 0;  // empty interferer window
    const auto rep = simulate({0.0, 0.0}, spec, sp, dp, mc);
    CHECK(rep.emp_mean == 0.0);
    CHECK(rep.emp_var == 0.0);
    const double g00 = channel_gain({0, 0}, {0.0, 0.0}, spec, dp, sp.pd_area);
    const double expected = q_func(sp.responsivity * sp.power_const * g00 / std::sqrt(dp.sigma_sq));
    CHECK(std::fabs(rep.emp_ser - expected) < 4.0 * rep.stderr_ser);
}

TEST_CASE("simulate: SER never exceeds the union bound meaningfully") {
    SystemParams sp;
    for (const auto& [ratio, k] : std::vector<std::pair<double, int>>{{3.0, 5}, {3.0, 10}}) {
        const DerivedParams dp = derive(sp, ratio);
        const LatticeSpec spec{1.0, ratio, k};
        McConfig mc;
        mc.n_slots = 200000;
        mc.seed = 99;
        mc.oracle_radius = 20;
        const auto rep = simulate({0.0, 0.0}, spec, sp, dp, mc);
        const auto mom = exact_moments({0.0, 0.0}, spec, sp, dp, mc.oracle_radius);
        const double d = 2.0 * sp.power_const * channel_gain({0, 0}, {0.0, 0.0}, spec, dp, sp.pd_area);
        const double bound = error_probability(mom, d, sp, dp);
        INFO("h/a = " << ratio << ", K = " << k);
        CHECK(rep.emp_ser <= bound + 4.0 * rep.stderr_ser);
    }
}

TEST_CASE("simulate: fixed transmit level is honoured") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    const LatticeSpec spec{1.0, 3.0, 8};
    McConfig mc;
    mc.n_slots = 50000;
    mc.seed = 5;
    mc.oracle_radius = 6;
    mc.transmit_level = 1;  // lowest level errs only upward
    const auto low = simulate({0.0, 0.0}, spec, sp, dp, mc);
    mc.transmit_level = 8;  // highest level errs only downward; the positive
                            // interference mean pushes the other way
    const auto high = simulate({0.0, 0.0}, spec, sp, dp, mc);
    CHECK(low.emp_ser > high.emp_ser);
    mc.transmit_level = 9;
    CHECK_THROWS_AS(simulate({0.0, 0.0}, spec, sp, dp, mc), std::invalid_argument);
}

TEST_CASE("simulate: config validation") {
    SystemParams sp;
    const DerivedParams dp = derive(sp, 3.0);
    McConfig mc;
    mc.n_slots = 0;
    CHECK_THROWS_AS(simulate({0.0, 0.0}, {1.0, 3.0, 1}, sp, dp, mc), std::invalid_argument);
    mc.n_slots = 10;
    mc.oracle_radius = -1;
    CHECK_THROWS_AS(simulate({0.0, 0.0}, {1.0, 3.0, 1}, sp, dp, mc), std::invalid_argument);
}
