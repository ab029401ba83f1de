#pragma once

// Per-location link metrics: M-PAM union-bound error probability, SINR,
// TDMA rate, goodput, and the exhaustive optimum-K search.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "attocell/interference.hpp"
#include "attocell/lattice.hpp"
#include "attocell/special_functions.hpp"
#include "attocell/system_params.hpp"

namespace attocell {

struct LinkMetrics {
    double p_e = 0.0;         // union-bound symbol error probability, clamped to [0,1]
    double gamma = 0.0;       // SINR
    double r_spectral = 0.0;  // (1/K^2) log2(1+gamma), bits/s/Hz
    double r_reported = 0.0;  // W * r_spectral, bits/s (the figure scale)
    double goodput = 0.0;     // r_reported * (1 - p_e), bits/s
    double d = 0.0;           // adjacent constellation distance 2 A G00(z), W
};

struct OptResult {
    int k_star = 1;
    double g_star = 0.0;  // bits/s
    std::vector<std::pair<int, LinkMetrics>> trace;
};

/// Union-bound M-PAM symbol error probability with interference moments in
/// the Q argument, clamped at 1.
inline double error_probability(const InterferenceMoments& moments, double d,
                                const SystemParams& sp, const DerivedParams& dp) {
    if (!(d > 0.0)) throw std::invalid_argument("link: constellation distance d must be > 0");
    const double arg = (sp.responsivity * d / 2.0 - moments.mean) / std::sqrt(dp.sigma_sq + moments.variance);
    const double bound = 2.0 * (sp.pam_order - 1.0) / sp.pam_order * q_func(arg);
    return std::min(1.0, bound);
}

/// Electrical SINR gamma(z) = T1^2 (z^2+h^2)^{-(m+3)} / (sigma1^2 + sigma^2).
inline double sinr(const ReceiverPos& pos, const LatticeSpec& spec, const SystemParams& sp,
                   const DerivedParams& dp, const InterferenceMoments& moments) {
    (void)sp;
    const double z2 = pos.x * pos.x + pos.y * pos.y;
    const double signal = dp.mean_prefactor * dp.mean_prefactor *
                          std::pow(z2 + spec.height * spec.height, -dp.beta);
    return signal / (moments.variance + dp.sigma_sq);
}

inline InterferenceMoments compute_moments(const ReceiverPos& pos, const LatticeSpec& spec,
                                           const SystemParams& sp, const DerivedParams& dp,
                                           SeriesOrder order, MomentMethod method,
                                           int oracle_n = 1000) {
    if (method == MomentMethod::exact_sum) return exact_moments(pos, spec, sp, dp, oracle_n);
    require_in_cell(pos, spec);
    return closed_form_moments(pos, spec, dp, order);
}

/// Link metrics assembled from precomputed interference moments.
inline LinkMetrics metrics_from_moments(const ReceiverPos& pos, const LatticeSpec& spec,
                                        const SystemParams& sp, const DerivedParams& dp,
                                        const InterferenceMoments& mom) {
    validate(spec);
    require_in_cell(pos, spec);
    LinkMetrics lm;
    lm.d = 2.0 * sp.power_const * channel_gain({0, 0}, pos, spec, dp, sp.pd_area);
    lm.p_e = error_probability(mom, lm.d, sp, dp);
    lm.gamma = sinr(pos, spec, sp, dp, mom);
    const double k2 = static_cast<double>(spec.tdma_k) * spec.tdma_k;
    lm.r_spectral = std::log2(1.0 + lm.gamma) / k2;
    lm.r_reported = sp.bandwidth * lm.r_spectral;
    lm.goodput = lm.r_reported * (1.0 - lm.p_e);
    return lm;
}

/// All link metrics for one (K, position) cell.
inline LinkMetrics metrics(const ReceiverPos& pos, const LatticeSpec& spec, const SystemParams& sp,
                           const DerivedParams& dp, SeriesOrder order = {},
                           MomentMethod method = MomentMethod::closed_form, int oracle_n = 1000) {
    validate(spec);
    require_in_cell(pos, spec);
    return metrics_from_moments(pos, spec, sp, dp,
                                compute_moments(pos, spec, sp, dp, order, method, oracle_n));
}

/// Exhaustive search for the goodput-maximizing K over [k_min, k_max].
/// Ties break toward the smallest K; the trace covers the whole range in
/// ascending order.
inline OptResult optimize_k(const ReceiverPos& pos, const LatticeSpec& spec_template,
                            const SystemParams& sp, const DerivedParams& dp, SeriesOrder order,
                            int k_min, int k_max, MomentMethod method = MomentMethod::closed_form,
                            int oracle_n = 1000) {
    if (k_min < 1 || k_min > k_max) throw std::invalid_argument("link: empty or invalid K range");
    OptResult res;
    res.k_star = 0;
    res.g_star = -1.0;
    for (int k = k_min; k <= k_max; ++k) {
        LatticeSpec spec = spec_template;
        spec.tdma_k = k;
        const LinkMetrics lm = metrics(pos, spec, sp, dp, order, method, oracle_n);
        if (lm.goodput > res.g_star) {
            res.g_star = lm.goodput;
            res.k_star = k;
        }
        res.trace.emplace_back(k, lm);
    }
    return res;
}

} // namespace attocell
