#pragma once

// Square-lattice geometry, line-of-sight channel gain, and the brute-force
// truncated-sum reference for the interference moments.

#include <cmath>
#include <stdexcept>
#include <string>

#include "attocell/system_params.hpp"

namespace attocell {

struct ReceiverPos {
    double x = 0.0;  // z_x, m
    double y = 0.0;  // z_y, m
    double radius() const { return std::hypot(x, y); }
};

struct LatticeSpec {
    double spacing = 1.0;  // a, m
    double height = 3.0;   // h, m
    int tdma_k = 1;        // K; active-LED spacing is K*a
};

struct LedIndex {
    int i = 0;
    int j = 0;
};

enum class MomentMethod { exact_sum, closed_form };

inline const char* to_string(MomentMethod m) {
    return m == MomentMethod::exact_sum ? "exact-sum" : "closed-form";
}

// Interference current moments in electrical units: mean (A), variance (A^2).
struct InterferenceMoments {
    double mean = 0.0;
    double variance = 0.0;
    MomentMethod method = MomentMethod::exact_sum;
};

inline void validate(const LatticeSpec& spec) {
    if (!(spec.spacing > 0.0)) throw std::invalid_argument("lattice: spacing a must be > 0");
    if (!(spec.height > 0.0)) throw std::invalid_argument("lattice: height h must be > 0");
    if (spec.tdma_k < 1) throw std::invalid_argument("lattice: TDMA parameter K must be >= 1");
}

// The PD tags to the LED at the origin; callers must pass coordinates inside
// that cell rather than relying on silent re-tagging.
inline void require_in_cell(const ReceiverPos& pos, const LatticeSpec& spec) {
    const double half = 0.5 * spec.spacing * spec.tdma_k;
    if (std::fabs(pos.x) > half || std::fabs(pos.y) > half)
        throw std::invalid_argument("lattice: PD position outside the tagged attocell (|z| > Ka/2)");
}

/// Ground distance between the PD and LED (i,j) on a lattice of the given spacing.
inline double horizontal_distance(LedIndex idx, const ReceiverPos& pos, double spacing) {
    if (!(spacing > 0.0)) throw std::invalid_argument("lattice: spacing must be > 0");
    return std::hypot(pos.x + idx.i * spacing, pos.y + idx.j * spacing);
}

/// LOS channel gain G_{i,j}(z) for the active-LED lattice (spacing K*a).
inline double channel_gain(LedIndex idx, const ReceiverPos& pos, const LatticeSpec& spec,
                           const DerivedParams& dp, double pd_area) {
    validate(spec);
    const double d = horizontal_distance(idx, pos, spec.spacing * spec.tdma_k);
    const double m = dp.lambertian_order;
    const double h = spec.height;
    return (m + 1.0) * pd_area * std::pow(h, m + 1.0) / (2.0 * kPi) *
           std::pow(d * d + h * h, -0.5 * (m + 3.0));
}

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double v) {
        const double y = v - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

/// Brute-force interference moments over the index window [-n,n]^2 minus the
/// tagged LED, with active spacing K*a. Deterministic summation order with
/// compensated accumulation.
inline InterferenceMoments exact_moments(const ReceiverPos& pos, const LatticeSpec& spec,
                                         const SystemParams& sp, const DerivedParams& dp, int n = 1000) {
    validate(spec);
    require_in_cell(pos, spec);
    if (n < 1) throw std::invalid_argument("lattice: truncation radius N must be >= 1");
    (void)sp;
    const double s = spec.spacing * spec.tdma_k;
    const double h2 = spec.height * spec.height;
    const double half_beta = 0.5 * dp.beta;
    const bool beta_is_4 = std::fabs(dp.beta - 4.0) < 1e-12;
    detail::KahanSum mean_sum, var_sum;
    for (int i = -n; i <= n; ++i) {
        const double dx = pos.x + i * s;
        for (int j = -n; j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            const double dy = pos.y + j * s;
            const double base = dx * dx + dy * dy + h2;
            double t;
            if (beta_is_4) {
                const double inv = 1.0 / base;
                t = inv * inv;
            } else {
                t = std::pow(base, -half_beta);
            }
            mean_sum.add(t);
            var_sum.add(t * t);
        }
    }
    InterferenceMoments out;
    out.mean = dp.mean_prefactor * mean_sum.sum;
    out.variance = dp.var_prefactor * var_sum.sum;
    out.method = MomentMethod::exact_sum;
    return out;
}

/// Mean current contributed by one interfering LED, A M G_{i,j}(z) R_pd.
inline double interferer_mean_current(LedIndex idx, const ReceiverPos& pos, const LatticeSpec& spec,
                                      const SystemParams& sp, const DerivedParams& dp) {
    return sp.power_const * sp.pam_order * channel_gain(idx, pos, spec, dp, sp.pd_area) * sp.responsivity;
}

} // namespace attocell
