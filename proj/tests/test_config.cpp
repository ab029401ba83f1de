#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "attocell/config.hpp"

using namespace attocell;

TEST_CASE("parse_config: defaults equal Table II and the fig-defaults sweep") {
    std::istringstream empty("");
    const RunConfig cfg = parse_config(empty);
    CHECK(cfg.system.noise_psd == 4.14e-21);
    CHECK(cfg.system.bandwidth == 40e6);
    CHECK(cfg.system.pd_area == 1e-4);
    CHECK(cfg.system.responsivity == 0.1);
    CHECK(cfg.system.pam_order == 8);
    CHECK(cfg.system.power_const == 1.0);
    CHECK(cfg.sweep.k_values.size() == 15);
    CHECK(cfg.sweep.ha_ratios == std::vector<double>{3.0, 5.0, 7.0});
    CHECK(cfg.output.path == "sweep.csv");
    CHECK_FALSE(cfg.output.emit_plots);
}

TEST_CASE("parse_config: full file round trip") {
    std::istringstream in(R"(
# experiment manifest
[system]
no = 4.14e-21
w = 4.0e7
a_pd = 1.0e-4
r_pd = 0.1
m = 8
a = 1.0
theta_f_deg = 90
theta_h_deg = 60
temperature = 300

[sweep]
k_values = 1..4
ha_ratios = 3,7
positions = 0,0; 0.25,0.25
method = both
order_u = 3
order_v = 4
auto_order = true
oracle_n = 500
mc_slots = 1000
mc_seed = 9
mc_radius = 12

[output]
path = out/result.csv
format = csv+plot
plot = gnuplot-script
)");
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.sweep.k_values == std::vector<int>{1, 2, 3, 4});
    CHECK(cfg.sweep.ha_ratios == std::vector<double>{3.0, 7.0});
    REQUIRE(cfg.sweep.positions.size() == 2);
    CHECK(cfg.sweep.positions[1].x == 0.25);
    CHECK(cfg.sweep.method == SweepMethod::both);
    CHECK(cfg.sweep.order.u == 3);
    CHECK(cfg.sweep.order.v == 4);
    CHECK(cfg.sweep.auto_order);
    CHECK(cfg.sweep.oracle_n == 500);
    REQUIRE(cfg.sweep.mc.has_value());
    CHECK(cfg.sweep.mc->n_slots == 1000);
    CHECK(cfg.sweep.mc->seed == 9);
    CHECK(cfg.sweep.mc->oracle_radius == 12);
    CHECK(cfg.output.path == "out/result.csv");
    CHECK(cfg.output.emit_plots);
    CHECK(cfg.output.plot_format == "gnuplot-script");
    CHECK(cfg.temperature == 300.0);  // parsed, never used
}

TEST_CASE("parse_config: rejects unknown keys and malformed input") {
    std::istringstream bad1("[system]\nbogus = 1\n");
    CHECK_THROWS_WITH(parse_config(bad1), Catch::Matchers::ContainsSubstring("unknown key"));
    std::istringstream bad2("[nowhere]\nno = 1\n");
    CHECK_THROWS_WITH(parse_config(bad2), Catch::Matchers::ContainsSubstring("unknown section"));
    std::istringstream bad3("no = 1\n");
    CHECK_THROWS_WITH(parse_config(bad3), Catch::Matchers::ContainsSubstring("outside any section"));
    std::istringstream bad4("[system]\nno 1\n");
    CHECK_THROWS_WITH(parse_config(bad4), Catch::Matchers::ContainsSubstring("key = value"));
    std::istringstream bad5("[system]\nw = fast\n");
    CHECK_THROWS_WITH(parse_config(bad5), Catch::Matchers::ContainsSubstring("bad numeric value"));
    std::istringstream bad6("[sweep]\nk_values = 5..2\n");
    CHECK_THROWS_AS(parse_config(bad6), std::invalid_argument);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.ini"), std::invalid_argument);
}

TEST_CASE("parse_config: comments and blank lines are ignored") {
    std::istringstream in("\n  # comment\n[sweep]\nk_values = 2,4,6  # trailing comment\n\n");
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.sweep.k_values == std::vector<int>{2, 4, 6});
}
