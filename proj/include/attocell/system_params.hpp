#pragma once

// Physical constants of the attocell downlink and the secondary constants
// derived from them. All angles are stored in radians; configuration
// boundaries (CLI, config file) accept degrees.

#include <cmath>
#include <stdexcept>
#include <string>

namespace attocell {

constexpr double kPi = 3.141592653589793238462643383279502884;

inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }

struct SystemParams {
    double noise_psd = 4.14e-21;     // N_o, A^2/Hz
    double bandwidth = 40e6;         // W, Hz
    double pd_area = 1e-4;           // A_pd, m^2
    double responsivity = 0.1;       // R_pd, A/W
    int pam_order = 8;               // M
    double power_const = 1.0;        // A, W
    double fov = deg_to_rad(90.0);   // theta_f, rad; only pi/2 supported
    double half_power_angle = deg_to_rad(60.0);  // theta_h, rad
};

struct DerivedParams {
    double lambertian_order;  // m
    double beta;              // m + 3
    double sigma_sq;          // N_o * W, A^2
    double optical_power;     // P_o = A * M, W
    double mean_prefactor;    // T1 = A M R_pd A_pd (m+1) h^{m+1} / (2 pi)
    double var_prefactor;     // T2 = A^2 (M^2-1) R_pd^2 A_pd^2 (m+1)^2 h^{2(m+1)} / (12 pi^2)
};

inline void validate(const SystemParams& sp) {
    auto positive = [](double v, const char* field) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw std::invalid_argument(std::string("system params: ") + field + " must be strictly positive");
    };
    positive(sp.noise_psd, "noise_psd (N_o)");
    positive(sp.bandwidth, "bandwidth (W)");
    positive(sp.pd_area, "pd_area (A_pd)");
    positive(sp.responsivity, "responsivity (R_pd)");
    positive(sp.power_const, "power_const (A)");
    if (sp.pam_order < 2)
        throw std::invalid_argument("system params: pam_order (M) must be an integer >= 2");
    if (!(sp.half_power_angle > 0.0) || !(sp.half_power_angle < kPi / 2.0))
        throw std::invalid_argument("system params: half_power_angle (theta_h) must lie in (0, pi/2)");
    // the channel gain has no FOV cutoff; it is only valid for a PD that sees
    // the whole plane
    if (std::fabs(sp.fov - kPi / 2.0) > 1e-9)
        throw std::invalid_argument("system params: fov (theta_f) must equal pi/2");
}

/// Derives the secondary constants for LEDs mounted at height h (metres).
inline DerivedParams derive(const SystemParams& sp, double h) {
    validate(sp);
    if (!(h > 0.0) || !std::isfinite(h))
        throw std::invalid_argument("system params: mount height h must be strictly positive");
    DerivedParams dp;
    dp.lambertian_order = -std::log(2.0) / std::log(std::cos(sp.half_power_angle));
    dp.beta = dp.lambertian_order + 3.0;
    dp.sigma_sq = sp.noise_psd * sp.bandwidth;
    dp.optical_power = sp.power_const * sp.pam_order;
    const double m = dp.lambertian_order;
    const double hp = std::pow(h, m + 1.0);
    dp.mean_prefactor = sp.power_const * sp.pam_order * sp.responsivity * sp.pd_area * (m + 1.0) * hp / (2.0 * kPi);
    const double m2 = static_cast<double>(sp.pam_order) * sp.pam_order;
    dp.var_prefactor = sp.power_const * sp.power_const * (m2 - 1.0) * sp.responsivity * sp.responsivity *
                       sp.pd_area * sp.pd_area * (m + 1.0) * (m + 1.0) * hp * hp / (12.0 * kPi * kPi);
    return dp;
}

} // namespace attocell
