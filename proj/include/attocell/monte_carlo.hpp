#pragma once

// Symbol-level Monte Carlo of the M-PAM downlink: every interferer in a
// truncated lattice window draws an independent uniform intensity level each
// slot, Gaussian receiver noise is added, and detection uses midpoint
// thresholds on the noiseless constellation. Validates the Gaussian
// moment-matching of the interference and the union-bound error probability.
//
// Reproducibility contract: slots are processed in fixed blocks of 4096; the
// RNG stream of block b is seeded with splitmix64(seed ^ b), so the report
// depends only on (config, seed), not on the worker count.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "attocell/lattice.hpp"
#include "attocell/parallel.hpp"
#include "attocell/system_params.hpp"

namespace attocell {

struct McConfig {
    std::uint64_t n_slots = 1'000'000;
    std::uint64_t seed = 1;
    int oracle_radius = 50;   // interferer window [-N,N]^2 minus the tagged LED
    int transmit_level = 0;   // 1..M fixes the tagged symbol; 0 draws uniformly
};

struct McReport {
    double emp_mean = 0.0;    // empirical interference mean, A
    double emp_var = 0.0;     // empirical interference variance, A^2
    double emp_ser = 0.0;     // empirical symbol error rate
    double stderr_mean = 0.0;
    double stderr_ser = 0.0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64
struct Xoshiro256pp {
    std::uint64_t s[4];
    explicit Xoshiro256pp(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s) {
            x = splitmix64(x);
            w = x;
        }
    }
    static std::uint64_t rotl(std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); }
    std::uint64_t next() {
        const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
        const std::uint64_t t = s[1] << 17;
        s[2] ^= s[0];
        s[3] ^= s[1];
        s[1] ^= s[2];
        s[0] ^= s[3];
        s[2] ^= t;
        s[3] = rotl(s[3], 45);
        return result;
    }
    // uniform in (0,1]
    double uniform() { return ((next() >> 11) + 1.0) * 0x1.0p-53; }
    // uniform integer in [0, m)
    std::uint32_t bounded(std::uint32_t m) {
        return static_cast<std::uint32_t>((static_cast<unsigned __int128>(next() >> 32) * m) >> 32);
    }
};

} // namespace detail

/// Simulates mc.n_slots symbol slots and reports empirical interference
/// moments and symbol error rate with their standard errors.
inline McReport simulate(const ReceiverPos& pos, const LatticeSpec& spec, const SystemParams& sp,
                         const DerivedParams& dp, const McConfig& mc) {
    validate(spec);
    require_in_cell(pos, spec);
    if (mc.n_slots < 1) throw std::invalid_argument("mcsim: n_slots must be >= 1");
    if (mc.oracle_radius < 0) throw std::invalid_argument("mcsim: oracle_radius must be >= 0");
    if (mc.transmit_level < 0 || mc.transmit_level > sp.pam_order)
        throw std::invalid_argument("mcsim: transmit_level must be 0 (uniform) or in 1..M");

    // per-interferer current weights s_level * w_j with w_j = A R G_j(z)
    std::vector<double> weights;
    const int n = mc.oracle_radius;
    weights.reserve(static_cast<std::size_t>(2 * n + 1) * (2 * n + 1));
    for (int i = -n; i <= n; ++i)
        for (int j = -n; j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            weights.push_back(sp.power_const * sp.responsivity *
                              channel_gain({i, j}, pos, spec, dp, sp.pd_area));
        }

    const double g00 = channel_gain({0, 0}, pos, spec, dp, sp.pd_area);
    const double step = sp.power_const * g00 * sp.responsivity;  // half of the constellation spacing
    const double sigma = std::sqrt(dp.sigma_sq);
    const int m_order = sp.pam_order;

    // accumulate moments around the analytic window mean so the variance does
    // not cancel against mean^2
    detail::KahanSum wsum;
    for (const double w : weights) wsum.add(w);
    const double shift = m_order * wsum.sum;

    constexpr std::uint64_t block_size = 4096;
    const std::uint64_t n_blocks = (mc.n_slots + block_size - 1) / block_size;

    struct BlockStats {
        double sum = 0.0, sum_sq = 0.0;
        std::uint64_t errors = 0;
    };
    std::vector<BlockStats> blocks(n_blocks);

    parallel_for(static_cast<int>(n_blocks), [&](int b) {
        detail::Xoshiro256pp rng(detail::splitmix64(mc.seed ^ static_cast<std::uint64_t>(b)));
        const std::uint64_t begin = static_cast<std::uint64_t>(b) * block_size;
        const std::uint64_t end = std::min(begin + block_size, mc.n_slots);
        detail::KahanSum acc, acc_sq;
        std::uint64_t errors = 0;
        for (std::uint64_t slot = begin; slot < end; ++slot) {
            double interf = 0.0;
            for (const double w : weights) {
                const int level = static_cast<int>(rng.bounded(static_cast<std::uint32_t>(m_order)));
                interf += (2.0 * level + 1.0) * w;
            }
            const int tx = (mc.transmit_level == 0)
                               ? static_cast<int>(rng.bounded(static_cast<std::uint32_t>(m_order))) + 1
                               : mc.transmit_level;
            // Box-Muller; one normal per slot keeps the stream layout simple
            const double u1 = rng.uniform();
            const double u2 = rng.uniform();
            const double noise = sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
            const double received = (2.0 * tx - 1.0) * step + interf + noise;
            int detected = static_cast<int>(std::floor((received / step + 1.0) * 0.5 + 0.5));
            detected = std::max(1, std::min(m_order, detected));
            if (detected != tx) ++errors;
            const double centered = interf - shift;
            acc.add(centered);
            acc_sq.add(centered * centered);
        }
        blocks[static_cast<std::size_t>(b)] = {acc.sum, acc_sq.sum, errors};
    });

    detail::KahanSum total, total_sq;
    std::uint64_t errors = 0;
    for (const auto& bs : blocks) {
        total.add(bs.sum);
        total_sq.add(bs.sum_sq);
        errors += bs.errors;
    }
    const double count = static_cast<double>(mc.n_slots);
    McReport rep;
    const double centered_mean = total.sum / count;
    rep.emp_mean = shift + centered_mean;
    const double var_num = total_sq.sum - count * centered_mean * centered_mean;
    rep.emp_var = (mc.n_slots > 1) ? var_num / (count - 1.0) : 0.0;
    rep.emp_ser = static_cast<double>(errors) / count;
    rep.stderr_mean = std::sqrt(std::max(0.0, rep.emp_var) / count);
    rep.stderr_ser = std::sqrt(std::max(0.0, rep.emp_ser * (1.0 - rep.emp_ser)) / count);
    return rep;
}

} // namespace attocell
