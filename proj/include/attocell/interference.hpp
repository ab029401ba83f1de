#pragma once

// Fourier-Bessel closed forms for the interference moments. Each series term
// carries the weight of its (+-w, +-f) lattice images divided by four, so the
// truncated series converges to the brute-force lattice sum; terms with w = 0
// or f = 0 have two images instead of four and enter at half weight.

#include <cmath>
#include <stdexcept>

#include "attocell/lattice.hpp"
#include "attocell/special_functions.hpp"
#include "attocell/system_params.hpp"

namespace attocell {

struct SeriesOrder {
    int u = 2;
    int v = 2;
};

/// Smallest order for which the omitted Bessel tail is negligible at active
/// spacing K*a. The smallest omitted argument 2*pi*h*s/(K*a) must stay large
/// enough that K_nu underflows past the series scale.
inline SeriesOrder order_for_convergence(const LatticeSpec& spec) {
    const double arg_target = 38.0;
    const double s_needed = arg_target * spec.spacing * spec.tdma_k / (2.0 * kPi * spec.height);
    const int o = std::max(2, static_cast<int>(std::ceil(s_needed)));
    return SeriesOrder{o, o};
}

namespace detail {

// shared series skeleton; the mean uses (order, power) = beta/2, the
// variance uses beta
inline double closed_form_bracket(const ReceiverPos& pos, const LatticeSpec& spec,
                                  const DerivedParams& dp, SeriesOrder order, bool variance) {
    const double beta_eff = variance ? dp.beta : 0.5 * dp.beta;
    const double h = spec.height;
    const double ap = spec.spacing * spec.tdma_k;
    const double z2 = pos.x * pos.x + pos.y * pos.y;

    const double lead = kPi * std::pow(h, 2.0 - 2.0 * beta_eff) / (ap * ap * (beta_eff - 1.0));
    const double self = std::pow(z2 + h * h, -beta_eff);
    const double nu = beta_eff - 1.0;
    const double gamma_beta = gamma_fn(beta_eff);
    const double two_pow = std::pow(2.0, beta_eff - 4.0);
    const double ap_pow = std::pow(ap, beta_eff + 1.0);

    KahanSum series;
    for (int w = 0; w <= order.u; ++w) {
        for (int f = 0; f <= order.v; ++f) {
            if (w == 0 && f == 0) continue;
            const double s = std::hypot(static_cast<double>(w), static_cast<double>(f));
            const double bessel = bessel_k(nu, 2.0 * kPi * h * s / ap);
            if (bessel == 0.0) continue;
            const double num = bessel * std::cos(2.0 * kPi * w * pos.x / ap) *
                               std::cos(2.0 * kPi * f * pos.y / ap);
            const double den = std::pow(h / (2.0 * kPi * s), nu) * two_pow * ap_pow * gamma_beta / kPi;
            double term = num / den;
            if (w == 0 || f == 0) term *= 0.5;  // two lattice images, not four
            series.add(term);
        }
    }
    return lead - self + series.sum;
}

} // namespace detail

/// Closed-form approximation of the interference mean (A). Requires beta > 2.
inline double mean_closed_form(const ReceiverPos& pos, const LatticeSpec& spec,
                               const DerivedParams& dp, SeriesOrder order = {}) {
    validate(spec);
    if (!(dp.beta > 2.0)) throw std::domain_error("interference: mean closed form requires beta > 2");
    return dp.mean_prefactor * detail::closed_form_bracket(pos, spec, dp, order, false);
}

/// Closed-form approximation of the interference variance (A^2). Requires beta > 1.
inline double variance_closed_form(const ReceiverPos& pos, const LatticeSpec& spec,
                                   const DerivedParams& dp, SeriesOrder order = {}) {
    validate(spec);
    if (!(dp.beta > 1.0)) throw std::domain_error("interference: variance closed form requires beta > 1");
    return dp.var_prefactor * detail::closed_form_bracket(pos, spec, dp, order, true);
}

/// Both closed-form moments, validated positive. A non-positive value means
/// the truncation order is too low for this K*a; callers either raise the
/// order or fall back to the exact sum.
inline InterferenceMoments closed_form_moments(const ReceiverPos& pos, const LatticeSpec& spec,
                                               const DerivedParams& dp, SeriesOrder order = {}) {
    InterferenceMoments out;
    out.mean = mean_closed_form(pos, spec, dp, order);
    out.variance = variance_closed_form(pos, spec, dp, order);
    out.method = MomentMethod::closed_form;
    if (!(out.mean > 0.0) || !(out.variance > 0.0))
        throw std::domain_error(
            "interference: closed-form series order (u,v) too low for this K*a; "
            "raise the order or use the exact sum");
    return out;
}

} // namespace attocell
