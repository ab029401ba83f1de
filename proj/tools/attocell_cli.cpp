// Command-line front end for the attocell link calculator.
//
// Subcommands:
//   metrics   -- one (h/a, K, position) cell, printed as a table
//   sweep     -- grid evaluation to CSV (+ optional plot files)
//   optimize  -- goodput-maximizing TDMA parameter K
//   validate  -- oracle-equivalence and Monte Carlo self-checks
//
// Exit codes: 0 success, 1 domain/runtime failure, 2 usage error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "attocell/config.hpp"
#include "attocell/link.hpp"
#include "attocell/monte_carlo.hpp"
#include "attocell/sweep.hpp"

namespace {

struct SystemFlags {
    double no = -1, w = -1, a_pd = -1, r_pd = -1, a = -1, theta_h = -1, theta_f = -1;
    int m = -1;
};

void add_system_flags(CLI::App* cmd, SystemFlags& f) {
    cmd->add_option("--no", f.no, "noise PSD N_o, A^2/Hz");
    cmd->add_option("--bandwidth", f.w, "modulation bandwidth W, Hz");
    cmd->add_option("--a-pd", f.a_pd, "PD area A_pd, m^2");
    cmd->add_option("--r-pd", f.r_pd, "PD responsivity R_pd, A/W");
    cmd->add_option("--pam-order", f.m, "PAM order M");
    cmd->add_option("--power-const", f.a, "optical power constant A, W");
    cmd->add_option("--theta-h", f.theta_h, "LED half-power semi-angle, degrees");
    cmd->add_option("--theta-f", f.theta_f, "PD field of view, degrees");
}

void apply_system_flags(const SystemFlags& f, attocell::SystemParams& sp) {
    if (f.no > 0) sp.noise_psd = f.no;
    if (f.w > 0) sp.bandwidth = f.w;
    if (f.a_pd > 0) sp.pd_area = f.a_pd;
    if (f.r_pd > 0) sp.responsivity = f.r_pd;
    if (f.m > 0) sp.pam_order = f.m;
    if (f.a > 0) sp.power_const = f.a;
    if (f.theta_h > 0) sp.half_power_angle = attocell::deg_to_rad(f.theta_h);
    if (f.theta_f > 0) sp.fov = attocell::deg_to_rad(f.theta_f);
}

attocell::MomentMethod parse_method(const std::string& m) {
    if (m == "exact-sum") return attocell::MomentMethod::exact_sum;
    if (m == "closed-form") return attocell::MomentMethod::closed_form;
    throw CLI::ValidationError("--method", "must be exact-sum or closed-form");
}

void print_metrics_row(double h_over_a, int k, const attocell::ReceiverPos& pos,
                       attocell::MomentMethod method, const attocell::InterferenceMoments& mom,
                       const attocell::LinkMetrics& lm) {
    std::printf("h_over_a   %-14.10g\n", h_over_a);
    std::printf("K          %d\n", k);
    std::printf("z          (%.10g, %.10g)\n", pos.x, pos.y);
    std::printf("method     %s\n", attocell::to_string(method));
    std::printf("mu         %.10e A\n", mom.mean);
    std::printf("sigma1_sq  %.10e A^2\n", mom.variance);
    std::printf("d          %.10e W\n", lm.d);
    std::printf("p_e        %.10g\n", lm.p_e);
    std::printf("gamma      %.10e\n", lm.gamma);
    std::printf("r_spectral %.10e bits/s/Hz\n", lm.r_spectral);
    std::printf("r_reported %.10e bits/s\n", lm.r_reported);
    std::printf("goodput    %.10e bits/s\n", lm.goodput);
}

int run_validate(const attocell::SystemParams& sp, std::uint64_t n_slots, std::uint64_t seed) {
    using namespace attocell;
    int failures = 0;
    int inconclusive = 0;

    std::printf("oracle equivalence (closed form vs exact sum, N=1000, tol 1e-5):\n");
    for (double ratio : {3.0, 5.0, 7.0}) {
        for (int k : {1, 2, 5, 10, 15}) {
            const LatticeSpec spec{1.0, ratio, k};
            const DerivedParams dp = derive(sp, spec.height);
            const ReceiverPos pos{0.0, 0.0};
            const auto exact = exact_moments(pos, spec, sp, dp, 1000);
            const auto order = order_for_convergence(spec);
            const auto closed = closed_form_moments(pos, spec, dp, order);
            const double em = std::fabs(closed.mean - exact.mean) / exact.mean;
            const double ev = std::fabs(closed.variance - exact.variance) / exact.variance;
            const bool ok = em <= 1e-5 && ev <= 1e-5;
            if (!ok) ++failures;
            std::printf("  h/a=%g K=%-2d  mean rel %.3e  var rel %.3e  %s\n", ratio, k, em, ev,
                        ok ? "ok" : "FAIL");
        }
    }

    std::printf("monte carlo vs analytic moments (n_slots=%llu, seed=%llu):\n",
                static_cast<unsigned long long>(n_slots), static_cast<unsigned long long>(seed));
    for (const auto& [ratio, k] : std::vector<std::pair<double, int>>{{3.0, 5}, {5.0, 8}}) {
        const LatticeSpec spec{1.0, ratio, k};
        const DerivedParams dp = derive(sp, spec.height);
        const ReceiverPos pos{0.0, 0.0};
        McConfig mc;
        mc.n_slots = n_slots;
        mc.seed = seed;
        mc.oracle_radius = 30;
        const auto rep = simulate(pos, spec, sp, dp, mc);
        const auto truth = exact_moments(pos, spec, sp, dp, mc.oracle_radius);
        const double dev = std::fabs(rep.emp_mean - truth.mean);
        if (rep.stderr_mean <= 0.0 || n_slots < 10000) {
            ++inconclusive;
            std::printf("  h/a=%g K=%-2d  inconclusive (too few slots for a stable standard error)\n",
                        ratio, k);
            continue;
        }
        const bool mean_ok = dev <= 4.0 * rep.stderr_mean;
        const bool var_ok = std::fabs(rep.emp_var - truth.variance) <= 0.05 * truth.variance;
        if (!(mean_ok && var_ok)) ++failures;
        std::printf("  h/a=%g K=%-2d  |mean dev| %.3e (4se %.3e) %s  var rel %.3e %s\n", ratio, k, dev,
                    4.0 * rep.stderr_mean, mean_ok ? "ok" : "FAIL",
                    std::fabs(rep.emp_var - truth.variance) / truth.variance, var_ok ? "ok" : "FAIL");
    }

    if (failures > 0) {
        std::printf("validate: %d check(s) failed\n", failures);
        return 1;
    }
    std::printf("validate: all checks passed%s\n",
                inconclusive ? " (some Monte Carlo checks skipped as inconclusive)" : "");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"LiFi attocell downlink interference and TDMA goodput calculator"};
    app.require_subcommand(1);

    // metrics
    auto* cmd_metrics = app.add_subcommand("metrics", "link metrics for one (h/a, K, position) cell");
    double m_ratio = 3.0, m_zx = 0.0, m_zy = 0.0;
    int m_k = 1, m_order_u = 2, m_order_v = 2, m_oracle_n = 1000;
    bool m_auto_order = false;
    std::string m_method = "closed-form";
    SystemFlags m_sys;
    cmd_metrics->add_option("--h-over-a", m_ratio, "height to LED spacing ratio")->check(CLI::PositiveNumber);
    cmd_metrics->add_option("--k", m_k, "TDMA parameter K")->check(CLI::PositiveNumber);
    cmd_metrics->add_option("--zx", m_zx, "PD x offset from the tagged LED, m");
    cmd_metrics->add_option("--zy", m_zy, "PD y offset from the tagged LED, m");
    cmd_metrics->add_option("--method", m_method, "exact-sum | closed-form");
    cmd_metrics->add_option("--order-u", m_order_u, "series order u")->check(CLI::NonNegativeNumber);
    cmd_metrics->add_option("--order-v", m_order_v, "series order v")->check(CLI::NonNegativeNumber);
    cmd_metrics->add_flag("--auto-order", m_auto_order, "raise (u,v) until the series converges");
    cmd_metrics->add_option("--oracle-n", m_oracle_n, "exact-sum truncation radius")->check(CLI::PositiveNumber);
    add_system_flags(cmd_metrics, m_sys);

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "grid evaluation to CSV");
    std::string s_config, s_out, s_k_range, s_ratios, s_method, s_positions, s_plot;
    bool s_with_mc = false, s_plots = false, s_auto_order = false;
    long long s_slots = -1, s_seed = -1;
    SystemFlags s_sys;
    cmd_sweep->add_option("--config", s_config, "config file path");
    cmd_sweep->add_option("--out", s_out, "output CSV path");
    cmd_sweep->add_option("--k-range", s_k_range, "K values, '1..15' or comma list");
    cmd_sweep->add_option("--ratios", s_ratios, "h/a ratios, comma list");
    cmd_sweep->add_option("--positions", s_positions, "positions 'zx,zy;zx,zy'");
    cmd_sweep->add_option("--method", s_method, "exact-sum | closed-form | both");
    cmd_sweep->add_flag("--with-mc", s_with_mc, "add Monte Carlo columns");
    cmd_sweep->add_option("--n-slots", s_slots, "Monte Carlo slots");
    cmd_sweep->add_option("--seed", s_seed, "Monte Carlo seed");
    cmd_sweep->add_flag("--plot", s_plots, "emit plot files next to the CSV");
    cmd_sweep->add_option("--plot-format", s_plot, "svg | gnuplot-script");
    cmd_sweep->add_flag("--auto-order", s_auto_order, "raise (u,v) until the series converges");
    add_system_flags(cmd_sweep, s_sys);

    // optimize
    auto* cmd_opt = app.add_subcommand("optimize", "search the goodput-maximizing K");
    double o_ratio = 3.0, o_zx = 0.0, o_zy = 0.0;
    int o_kmin = 1, o_kmax = 15;
    bool o_auto_order = true;
    std::string o_method = "closed-form";
    SystemFlags o_sys;
    cmd_opt->add_option("--h-over-a", o_ratio, "height to LED spacing ratio")->check(CLI::PositiveNumber);
    cmd_opt->add_option("--k-min", o_kmin, "smallest K")->check(CLI::PositiveNumber);
    cmd_opt->add_option("--k-max", o_kmax, "largest K")->check(CLI::PositiveNumber);
    cmd_opt->add_option("--zx", o_zx, "PD x offset, m");
    cmd_opt->add_option("--zy", o_zy, "PD y offset, m");
    cmd_opt->add_option("--method", o_method, "exact-sum | closed-form");
    cmd_opt->add_flag("--fixed-order,!--auto-order", o_auto_order,
                      "use the configured (u,v) instead of auto-raising");
    add_system_flags(cmd_opt, o_sys);

    // validate
    auto* cmd_val = app.add_subcommand("validate", "run oracle-equivalence and Monte Carlo checks");
    long long v_slots = 200000, v_seed = 1;
    SystemFlags v_sys;
    cmd_val->add_option("--n-slots", v_slots, "Monte Carlo slots")->check(CLI::PositiveNumber);
    cmd_val->add_option("--seed", v_seed, "Monte Carlo seed");
    add_system_flags(cmd_val, v_sys);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_metrics->parsed()) {
            attocell::SystemParams sp;
            apply_system_flags(m_sys, sp);
            const attocell::LatticeSpec spec{1.0, m_ratio, m_k};
            const attocell::DerivedParams dp = attocell::derive(sp, spec.height);
            const attocell::ReceiverPos pos{m_zx, m_zy};
            attocell::SeriesOrder order{m_order_u, m_order_v};
            if (m_auto_order) order = attocell::order_for_convergence(spec);
            const auto method = parse_method(m_method);
            const auto mom = attocell::compute_moments(pos, spec, sp, dp, order, method, m_oracle_n);
            const auto lm = attocell::metrics_from_moments(pos, spec, sp, dp, mom);
            print_metrics_row(m_ratio, m_k, pos, method, mom, lm);
            return 0;
        }

        if (cmd_sweep->parsed()) {
            attocell::RunConfig cfg;
            if (!s_config.empty()) cfg = attocell::parse_config_file(s_config);
            apply_system_flags(s_sys, cfg.system);
            if (!s_k_range.empty()) cfg.sweep.k_values = attocell::detail::parse_k_values(s_k_range, "--k-range");
            if (!s_ratios.empty()) cfg.sweep.ha_ratios = attocell::detail::parse_double_list(s_ratios, "--ratios");
            if (!s_positions.empty())
                cfg.sweep.positions = attocell::detail::parse_positions(s_positions, "--positions");
            if (!s_method.empty()) {
                if (s_method == "both") cfg.sweep.method = attocell::SweepMethod::both;
                else cfg.sweep.method = parse_method(s_method) == attocell::MomentMethod::exact_sum
                                            ? attocell::SweepMethod::exact_sum
                                            : attocell::SweepMethod::closed_form;
            }
            if (s_auto_order) cfg.sweep.auto_order = true;
            if (s_with_mc && !cfg.sweep.mc) cfg.sweep.mc = attocell::McConfig{};
            if (cfg.sweep.mc) {
                if (s_slots > 0) cfg.sweep.mc->n_slots = static_cast<std::uint64_t>(s_slots);
                if (s_seed >= 0) cfg.sweep.mc->seed = static_cast<std::uint64_t>(s_seed);
            }
            if (!s_out.empty()) cfg.output.path = s_out;
            if (s_plots) cfg.output.emit_plots = true;
            if (!s_plot.empty()) {
                if (s_plot != "svg" && s_plot != "gnuplot-script")
                    throw CLI::ValidationError("--plot-format", "must be svg or gnuplot-script");
                cfg.output.plot_format = s_plot;
            }

            const auto result = attocell::run_sweep(cfg.sweep, cfg.system);
            attocell::write_file_atomic(cfg.output.path, attocell::to_csv(result, cfg.sweep, cfg.system));
            if (cfg.output.emit_plots) {
                const std::string prefix =
                    cfg.output.path.substr(0, cfg.output.path.find_last_of('.') == std::string::npos
                                                  ? cfg.output.path.size()
                                                  : cfg.output.path.find_last_of('.'));
                for (const std::string metric : {"p_e", "r_reported", "goodput"}) {
                    if (cfg.output.plot_format == "svg") {
                        for (double ratio : cfg.sweep.ha_ratios) {
                            std::ostringstream name;
                            name << prefix << "_" << metric << "_ha" << ratio << ".svg";
                            attocell::write_file_atomic(name.str(),
                                                        attocell::to_svg(result, ratio, metric));
                        }
                    } else {
                        attocell::write_file_atomic(prefix + "_" + metric + ".gp",
                                                    attocell::to_gnuplot(cfg.output.path, cfg.sweep,
                                                                         metric, prefix));
                    }
                }
            }
            return 0;
        }

        if (cmd_opt->parsed()) {
            attocell::SystemParams sp;
            apply_system_flags(o_sys, sp);
            const attocell::LatticeSpec spec{1.0, o_ratio, 1};
            const attocell::DerivedParams dp = attocell::derive(sp, spec.height);
            const attocell::ReceiverPos pos{o_zx, o_zy};
            const auto method = parse_method(o_method);
            attocell::SeriesOrder order{2, 2};
            if (o_auto_order) {
                attocell::LatticeSpec widest = spec;
                widest.tdma_k = o_kmax;
                order = attocell::order_for_convergence(widest);
            }
            const auto res = attocell::optimize_k(pos, spec, sp, dp, order, o_kmin, o_kmax, method);
            std::printf("K*  %d\n", res.k_star);
            std::printf("G*  %.10e bits/s\n", res.g_star);
            std::printf("%-4s %-12s %-14s %-14s\n", "K", "p_e", "r_reported", "goodput");
            for (const auto& [k, lm] : res.trace)
                std::printf("%-4d %-12.6g %-14.8e %-14.8e\n", k, lm.p_e, lm.r_reported, lm.goodput);
            return 0;
        }

        if (cmd_val->parsed()) {
            attocell::SystemParams sp;
            apply_system_flags(v_sys, sp);
            return run_validate(sp, static_cast<std::uint64_t>(v_slots), static_cast<std::uint64_t>(v_seed));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        // config-file and flag-value problems are usage errors
        return std::string(e.what()).rfind("config:", 0) == 0 ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
