#pragma once

// Flat key-value run configuration with [system], [sweep] and [output]
// sections. Defaults reproduce the numerical setup of the reference
// experiment (Table II constants, K in 1..15, h/a in {3,5,7}, PD at the cell
// centre). Unknown keys are rejected so experiment manifests stay auditable.

#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "attocell/sweep.hpp"

namespace attocell {

struct OutputConfig {
    std::string path = "sweep.csv";
    bool emit_plots = false;
    std::string plot_format = "svg";  // svg | gnuplot-script
};

struct RunConfig {
    SystemParams system;
    SweepSpec sweep = default_sweep();
    OutputConfig output;
    double temperature = 300.0;  // parsed and ignored; never enters any formula
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (...) {
        throw std::invalid_argument("config: bad numeric value '" + v + "' for key " + key);
    }
}

inline long parse_long(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const long n = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return n;
    } catch (...) {
        throw std::invalid_argument("config: bad integer value '" + v + "' for key " + key);
    }
}

// "1..15" or "1,2,5"
inline std::vector<int> parse_k_values(const std::string& v, const std::string& key) {
    std::vector<int> out;
    const auto dots = v.find("..");
    if (dots != std::string::npos) {
        const long lo = parse_long(trim(v.substr(0, dots)), key);
        const long hi = parse_long(trim(v.substr(dots + 2)), key);
        if (lo < 1 || hi < lo) throw std::invalid_argument("config: bad K range '" + v + "'");
        for (long k = lo; k <= hi; ++k) out.push_back(static_cast<int>(k));
        return out;
    }
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(static_cast<int>(parse_long(trim(item), key)));
    if (out.empty()) throw std::invalid_argument("config: empty list for key " + key);
    return out;
}

inline std::vector<double> parse_double_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), key));
    if (out.empty()) throw std::invalid_argument("config: empty list for key " + key);
    return out;
}

// "zx,zy; zx,zy; ..."
inline std::vector<ReceiverPos> parse_positions(const std::string& v, const std::string& key) {
    std::vector<ReceiverPos> out;
    std::stringstream ss(v);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        const auto comma = pair.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("config: positions must be 'zx,zy' pairs separated by ';'");
        out.push_back({parse_double(trim(pair.substr(0, comma)), key),
                       parse_double(trim(pair.substr(comma + 1)), key)});
    }
    if (out.empty()) throw std::invalid_argument("config: empty list for key " + key);
    return out;
}

} // namespace detail

inline void apply_config_entry(RunConfig& cfg, const std::string& section, const std::string& key,
                               const std::string& value) {
    using detail::parse_double;
    using detail::parse_long;
    if (section == "system") {
        if (key == "no") cfg.system.noise_psd = parse_double(value, key);
        else if (key == "w") cfg.system.bandwidth = parse_double(value, key);
        else if (key == "a_pd") cfg.system.pd_area = parse_double(value, key);
        else if (key == "r_pd") cfg.system.responsivity = parse_double(value, key);
        else if (key == "m") cfg.system.pam_order = static_cast<int>(parse_long(value, key));
        else if (key == "a") cfg.system.power_const = parse_double(value, key);
        else if (key == "theta_f_deg") cfg.system.fov = deg_to_rad(parse_double(value, key));
        else if (key == "theta_h_deg") cfg.system.half_power_angle = deg_to_rad(parse_double(value, key));
        else if (key == "temperature") cfg.temperature = parse_double(value, key);
        else throw std::invalid_argument("config: unknown key [system] " + key);
    } else if (section == "sweep") {
        if (key == "k_values") cfg.sweep.k_values = detail::parse_k_values(value, key);
        else if (key == "ha_ratios") cfg.sweep.ha_ratios = detail::parse_double_list(value, key);
        else if (key == "positions") cfg.sweep.positions = detail::parse_positions(value, key);
        else if (key == "method") {
            if (value == "exact-sum") cfg.sweep.method = SweepMethod::exact_sum;
            else if (value == "closed-form") cfg.sweep.method = SweepMethod::closed_form;
            else if (value == "both") cfg.sweep.method = SweepMethod::both;
            else throw std::invalid_argument("config: method must be exact-sum, closed-form or both");
        } else if (key == "order_u") cfg.sweep.order.u = static_cast<int>(parse_long(value, key));
        else if (key == "order_v") cfg.sweep.order.v = static_cast<int>(parse_long(value, key));
        else if (key == "auto_order") cfg.sweep.auto_order = (value == "true" || value == "1");
        else if (key == "oracle_n") cfg.sweep.oracle_n = static_cast<int>(parse_long(value, key));
        else if (key == "mc_slots") {
            const long n = parse_long(value, key);
            if (n > 0) {
                if (!cfg.sweep.mc) cfg.sweep.mc = McConfig{};
                cfg.sweep.mc->n_slots = static_cast<std::uint64_t>(n);
            }
        } else if (key == "mc_seed") {
            if (!cfg.sweep.mc) cfg.sweep.mc = McConfig{};
            cfg.sweep.mc->seed = static_cast<std::uint64_t>(parse_long(value, key));
        } else if (key == "mc_radius") {
            if (!cfg.sweep.mc) cfg.sweep.mc = McConfig{};
            cfg.sweep.mc->oracle_radius = static_cast<int>(parse_long(value, key));
        } else throw std::invalid_argument("config: unknown key [sweep] " + key);
    } else if (section == "output") {
        if (key == "path") cfg.output.path = value;
        else if (key == "format") {
            if (value == "csv") cfg.output.emit_plots = false;
            else if (value == "csv+plot") cfg.output.emit_plots = true;
            else throw std::invalid_argument("config: format must be csv or csv+plot");
        } else if (key == "plot") {
            if (value != "svg" && value != "gnuplot-script")
                throw std::invalid_argument("config: plot must be svg or gnuplot-script");
            cfg.output.plot_format = value;
        } else throw std::invalid_argument("config: unknown key [output] " + key);
    } else {
        throw std::invalid_argument("config: unknown section [" + section + "]");
    }
}

/// Parses a config file. Lines are 'key = value'; '#' and ';' start comments;
/// sections are [system], [sweep], [output].
inline RunConfig parse_config(std::istream& in) {
    RunConfig cfg;
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#");
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("config: malformed section header at line " + std::to_string(line_no));
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value' at line " + std::to_string(line_no));
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config: key '" + key + "' outside any section at line " +
                                        std::to_string(line_no));
        apply_config_entry(cfg, section, key, value);
    }
    return cfg;
}

inline RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    return parse_config(in);
}

} // namespace attocell
