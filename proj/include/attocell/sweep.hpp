#pragma once

// Batch experiment engine: evaluates the link metrics over a grid of TDMA
// parameters, h/a ratios, and PD positions, and serializes the result as CSV
// plus optional plot files. Ratios are realized as a = 1 m, h = ratio; the
// realized values are echoed in the CSV metadata.

#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "attocell/link.hpp"
#include "attocell/monte_carlo.hpp"
#include "attocell/parallel.hpp"

namespace attocell {

enum class SweepMethod { exact_sum, closed_form, both };

struct SweepSpec {
    std::vector<int> k_values;
    std::vector<double> ha_ratios;
    std::vector<ReceiverPos> positions;
    SweepMethod method = SweepMethod::closed_form;
    SeriesOrder order = {2, 2};
    bool auto_order = false;       // raise (u,v) per cell until the series converges
    int oracle_n = 1000;           // truncation radius for exact sums
    std::optional<McConfig> mc;    // adds Monte Carlo columns
};

struct SweepRow {
    double h_over_a = 0.0;
    int k = 1;
    double z_x = 0.0;
    double z_y = 0.0;
    MomentMethod method = MomentMethod::closed_form;
    double mu = 0.0;
    double sigma1_sq = 0.0;
    double p_e = 0.0;
    double gamma = 0.0;
    double r_spectral = 0.0;
    double r_reported = 0.0;
    double goodput = 0.0;
    std::optional<McReport> mc;
    std::string error;  // empty on success
};

struct KStarSummary {
    double h_over_a = 0.0;
    double z_x = 0.0;
    double z_y = 0.0;
    MomentMethod method = MomentMethod::closed_form;
    int k_star = 0;
    double g_star = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<KStarSummary> summaries;
};

inline void validate(const SweepSpec& spec) {
    if (spec.k_values.empty() || spec.ha_ratios.empty() || spec.positions.empty())
        throw std::invalid_argument("sweep: k_values, ha_ratios and positions must be non-empty");
    for (int k : spec.k_values)
        if (k < 1) throw std::invalid_argument("sweep: K values must be >= 1");
    for (double r : spec.ha_ratios)
        if (!(r > 0.0)) throw std::invalid_argument("sweep: h/a ratios must be > 0");
}

/// Fig-defaults sweep: K in 1..15, h/a in {3,5,7}, PD at the cell centre,
/// closed-form moments at order (2,2).
inline SweepSpec default_sweep() {
    SweepSpec s;
    for (int k = 1; k <= 15; ++k) s.k_values.push_back(k);
    s.ha_ratios = {3.0, 5.0, 7.0};
    s.positions = {ReceiverPos{0.0, 0.0}};
    return s;
}

/// Evaluates the full cartesian product. Per-cell failures land in the row's
/// error column; the rest of the grid still runs. Cells may execute
/// concurrently; row order is always (ratio, K, position, method).
inline SweepResult run_sweep(const SweepSpec& spec, const SystemParams& sp) {
    validate(spec);
    const std::vector<MomentMethod> methods =
        spec.method == SweepMethod::both
            ? std::vector<MomentMethod>{MomentMethod::exact_sum, MomentMethod::closed_form}
            : std::vector<MomentMethod>{spec.method == SweepMethod::exact_sum
                                            ? MomentMethod::exact_sum
                                            : MomentMethod::closed_form};

    SweepResult result;
    result.rows.resize(spec.ha_ratios.size() * spec.k_values.size() * spec.positions.size() *
                       methods.size());

    const int n_cells = static_cast<int>(result.rows.size());
    parallel_for(n_cells, [&](int cell) {
        int rest = cell;
        const int mi = rest % static_cast<int>(methods.size());
        rest /= static_cast<int>(methods.size());
        const int pi = rest % static_cast<int>(spec.positions.size());
        rest /= static_cast<int>(spec.positions.size());
        const int ki = rest % static_cast<int>(spec.k_values.size());
        const int ri = rest / static_cast<int>(spec.k_values.size());

        SweepRow& row = result.rows[static_cast<std::size_t>(cell)];
        row.h_over_a = spec.ha_ratios[static_cast<std::size_t>(ri)];
        row.k = spec.k_values[static_cast<std::size_t>(ki)];
        const ReceiverPos pos = spec.positions[static_cast<std::size_t>(pi)];
        row.z_x = pos.x;
        row.z_y = pos.y;
        row.method = methods[static_cast<std::size_t>(mi)];
        try {
            const LatticeSpec lattice{1.0, row.h_over_a, row.k};
            const DerivedParams dp = derive(sp, lattice.height);
            SeriesOrder order = spec.order;
            if (spec.auto_order && row.method == MomentMethod::closed_form)
                order = order_for_convergence(lattice);
            const InterferenceMoments mom =
                compute_moments(pos, lattice, sp, dp, order, row.method, spec.oracle_n);
            const LinkMetrics lm = metrics_from_moments(pos, lattice, sp, dp, mom);
            row.mu = mom.mean;
            row.sigma1_sq = mom.variance;
            row.p_e = lm.p_e;
            row.gamma = lm.gamma;
            row.r_spectral = lm.r_spectral;
            row.r_reported = lm.r_reported;
            row.goodput = lm.goodput;
            if (spec.mc) row.mc = simulate(pos, lattice, sp, dp, *spec.mc);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    });

    // smallest-K argmax of goodput per (ratio, position, method), skipping
    // failed cells
    for (std::size_t ri = 0; ri < spec.ha_ratios.size(); ++ri)
        for (std::size_t pi = 0; pi < spec.positions.size(); ++pi)
            for (std::size_t mi = 0; mi < methods.size(); ++mi) {
                KStarSummary summary;
                summary.h_over_a = spec.ha_ratios[ri];
                summary.z_x = spec.positions[pi].x;
                summary.z_y = spec.positions[pi].y;
                summary.method = methods[mi];
                summary.g_star = -1.0;
                for (std::size_t ki = 0; ki < spec.k_values.size(); ++ki) {
                    const std::size_t idx =
                        ((ri * spec.k_values.size() + ki) * spec.positions.size() + pi) * methods.size() + mi;
                    const SweepRow& row = result.rows[idx];
                    if (!row.error.empty()) continue;
                    if (row.goodput > summary.g_star) {
                        summary.g_star = row.goodput;
                        summary.k_star = row.k;
                    }
                }
                if (summary.k_star > 0) result.summaries.push_back(summary);
            }
    return result;
}

namespace detail {

inline std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

} // namespace detail

/// CSV serialization: '#' metadata lines, a header row named after the
/// SweepRow fields, then one line per row with 12 significant digits.
inline std::string to_csv(const SweepResult& result, const SweepSpec& spec, const SystemParams& sp) {
    std::ostringstream os;
    os << "# attocell sweep\n";
    os << "# a = 1 (h/a ratios realized as h = ratio, a = 1)\n";
    os << "# system: N_o=" << detail::format_sig(sp.noise_psd) << " W=" << detail::format_sig(sp.bandwidth)
       << " A_pd=" << detail::format_sig(sp.pd_area) << " R_pd=" << detail::format_sig(sp.responsivity)
       << " M=" << sp.pam_order << " A=" << detail::format_sig(sp.power_const) << "\n";
    os << "# order: u=" << spec.order.u << " v=" << spec.order.v
       << (spec.auto_order ? " (auto-raised per cell)" : "") << "\n";
    os << "# exact-sum truncation N=" << spec.oracle_n << "\n";
    if (spec.mc)
        os << "# mc: n_slots=" << spec.mc->n_slots << " seed=" << spec.mc->seed
           << " oracle_radius=" << spec.mc->oracle_radius << "\n";
    for (const auto& s : result.summaries)
        os << "# k_star: h_over_a=" << detail::format_sig(s.h_over_a) << " z=("
           << detail::format_sig(s.z_x) << "," << detail::format_sig(s.z_y) << ") method="
           << to_string(s.method) << " K*=" << s.k_star
           << " G*=" << detail::format_sig(s.g_star) << "\n";

    os << "h_over_a,K,z_x,z_y,method,mu,sigma1_sq,p_e,gamma,r_spectral,r_reported,goodput";
    if (spec.mc) os << ",emp_mean,emp_var,emp_ser,stderr_mean,stderr_ser";
    os << ",error\n";
    for (const auto& r : result.rows) {
        os << detail::format_sig(r.h_over_a) << ',' << r.k << ',' << detail::format_sig(r.z_x) << ','
           << detail::format_sig(r.z_y) << ',' << to_string(r.method) << ',';
        if (r.error.empty()) {
            os << detail::format_sig(r.mu) << ',' << detail::format_sig(r.sigma1_sq) << ','
               << detail::format_sig(r.p_e) << ',' << detail::format_sig(r.gamma) << ','
               << detail::format_sig(r.r_spectral) << ',' << detail::format_sig(r.r_reported) << ','
               << detail::format_sig(r.goodput);
            if (spec.mc) {
                if (r.mc)
                    os << ',' << detail::format_sig(r.mc->emp_mean) << ',' << detail::format_sig(r.mc->emp_var)
                       << ',' << detail::format_sig(r.mc->emp_ser) << ','
                       << detail::format_sig(r.mc->stderr_mean) << ',' << detail::format_sig(r.mc->stderr_ser);
                else
                    os << ",,,,,";
            }
            os << ',';
        } else {
            os << ",,,,,,";
            if (spec.mc) os << ",,,,,";
            std::string msg = r.error;
            for (auto& c : msg)
                if (c == ',' || c == '\n') c = ';';
            os << ',' << msg;
        }
        os << '\n';
    }
    return os.str();
}

/// Writes text atomically: temp file in the same directory, then rename.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open output file " + tmp);
        out << content;
        if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

namespace detail {

inline double row_metric(const SweepRow& r, const std::string& name) {
    if (name == "p_e") return r.p_e;
    if (name == "r_reported") return r.r_reported;
    return r.goodput;
}

} // namespace detail

/// Self-contained SVG line plot of one metric vs K for one ratio, first
/// position and method only.
inline std::string to_svg(const SweepResult& result, double ratio, const std::string& metric) {
    std::vector<std::pair<int, double>> pts;
    double z0x = 0.0, z0y = 0.0;
    bool have_pos = false;
    MomentMethod m0 = MomentMethod::closed_form;
    bool have_m = false;
    for (const auto& r : result.rows) {
        if (r.h_over_a != ratio || !r.error.empty()) continue;
        if (!have_pos) {
            z0x = r.z_x;
            z0y = r.z_y;
            have_pos = true;
        }
        if (r.z_x != z0x || r.z_y != z0y) continue;
        if (!have_m) {
            m0 = r.method;
            have_m = true;
        }
        if (r.method != m0) continue;
        pts.emplace_back(r.k, detail::row_metric(r, metric));
    }
    if (pts.empty()) throw std::runtime_error("plot: no rows for ratio " + detail::format_sig(ratio));
    double lo = pts[0].second, hi = pts[0].second;
    int klo = pts[0].first, khi = pts[0].first;
    for (const auto& p : pts) {
        lo = std::min(lo, p.second);
        hi = std::max(hi, p.second);
        klo = std::min(klo, p.first);
        khi = std::max(khi, p.first);
    }
    if (hi == lo) hi = lo + 1.0;
    if (khi == klo) khi = klo + 1;
    const double w = 640, h = 420, ml = 70, mr = 20, mt = 20, mb = 50;
    auto px = [&](int k) { return ml + (w - ml - mr) * (k - klo) / double(khi - klo); };
    auto py = [&](double v) { return h - mb - (h - mt - mb) * (v - lo) / (hi - lo); };
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
       << "\" stroke=\"black\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (const auto& p : pts) os << px(p.first) << ',' << py(p.second) << ' ';
    os << "\"/>\n";
    for (const auto& p : pts)
        os << "<circle cx=\"" << px(p.first) << "\" cy=\"" << py(p.second) << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    os << "<text x=\"" << (w / 2) << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">TDMA parameter K</text>\n";
    os << "<text x=\"16\" y=\"" << (h / 2) << "\" transform=\"rotate(-90 16 " << (h / 2)
       << ")\" text-anchor=\"middle\">" << metric << " (h/a=" << detail::format_sig(ratio) << ")</text>\n";
    os << "<text x=\"" << ml << "\" y=\"" << (h - mb + 16) << "\">" << klo << "</text>\n";
    os << "<text x=\"" << (w - mr) << "\" y=\"" << (h - mb + 16) << "\" text-anchor=\"end\">" << khi
       << "</text>\n";
    os << "<text x=\"" << (ml - 6) << "\" y=\"" << py(lo) << "\" text-anchor=\"end\">" << detail::format_sig(lo)
       << "</text>\n";
    os << "<text x=\"" << (ml - 6) << "\" y=\"" << (py(hi) + 10) << "\" text-anchor=\"end\">"
       << detail::format_sig(hi) << "</text>\n";
    os << "</svg>\n";
    return os.str();
}

/// Gnuplot script that draws metric vs K from the CSV, one series per ratio.
inline std::string to_gnuplot(const std::string& csv_path, const SweepSpec& spec,
                              const std::string& metric, const std::string& out_prefix) {
    int col = 12;  // goodput
    if (metric == "p_e") col = 8;
    if (metric == "r_reported") col = 11;
    std::ostringstream os;
    os << "set datafile separator ','\n";
    os << "set xlabel 'TDMA parameter K'\n";
    os << "set ylabel '" << metric << "'\n";
    os << "set grid\n";
    os << "set term svg size 640,420\n";
    os << "set output '" << out_prefix << "_" << metric << ".svg'\n";
    os << "plot";
    bool first = true;
    for (double r : spec.ha_ratios) {
        os << (first ? " " : ", \\\n     ") << "'" << csv_path << "' using 2:((stringcolumn(5) eq '"
           << to_string(spec.method == SweepMethod::exact_sum ? MomentMethod::exact_sum
                                                              : MomentMethod::closed_form)
           << "' && $1 == " << detail::format_sig(r) << ") ? $" << col
           << " : 1/0) with linespoints title 'h/a=" << detail::format_sig(r) << "'";
        first = false;
    }
    os << "\n";
    return os.str();
}

} // namespace attocell
