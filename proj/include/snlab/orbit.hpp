#pragma once

#include <cstdint>
#include <vector>

#include "snlab/circle.hpp"
#include "snlab/errors.hpp"
#include "snlab/family.hpp"
#include "snlab/rng.hpp"

// Deterministic and random orbit generation, derivative cocycles,
// Lyapunov estimates, and channel entry/exit statistics.

namespace snlab {

/// Absolutely continuous parameter noise, uniform on [lo, lo+epsilon],
/// support contained in [0, t_0_cap].
struct NoiseKernel {
    double epsilon = 0.0;
    double lo = 0.0;
    double t_0_cap = 0.2;

    static NoiseKernel uniform(double eps, double t_0_cap = 0.2);
    static NoiseKernel uniform_range(double lo, double hi, double t_0_cap = 0.2);

    double draw(std::uint64_t seed, std::uint64_t step) const {
        return lo + epsilon * rng_uniform(seed, 0, step);
    }
};

/// A recorded orbit segment: points, log-derivative cocycle, and the
/// parameter used to reach each point. The three arrays have equal length
/// and the whole record is replayable from (seed, inputs).
struct OrbitRecord {
    std::vector<double> points;
    std::vector<double> log_derivs;   // log f'(points[i])
    std::vector<double> params_used;  // params_used[i] produced points[i] from points[i-1]
    std::uint64_t seed = 0;

    std::size_t size() const { return points.size(); }
};

// Streaming iteration core. Consumer receives (x, log_deriv, t) per step.
// The doubling oracle at t == 0 iterates in exact arithmetic mod the prime
// M = 2^63 - 25; in plain doubles every orbit of 2x mod 1 collapses to 0
// within ~1100 steps as mantissa bits shift out.
namespace detail {
inline constexpr std::uint64_t kDoublingModulus = 9223372036854775783ULL;  // 2^63 - 25
}

template <class Consumer>
void stream_orbit(const MapFamily& fam, double t, double x0, long n, long burn, Consumer&& eat) {
    fam.require_t(t);
    if (n < 1) throw DomainError("orbit: n must be >= 1");
    if (burn < 0) throw DomainError("orbit: burn must be >= 0");
    if (fam.kind == FamilyKind::DoublingOracle && t == 0.0) {
        const std::uint64_t M = detail::kDoublingModulus;
        std::uint64_t k = static_cast<std::uint64_t>(x0 * static_cast<double>(M) + 0.5) % M;
        for (long i = 0; i < burn; ++i) {
            k <<= 1;
            if (k >= M) k -= M;
        }
        const double logd = std::log(2.0);
        for (long i = 0; i < n; ++i) {
            eat(static_cast<double>(k) / static_cast<double>(M), logd, t);
            k <<= 1;
            if (k >= M) k -= M;
        }
        return;
    }
    double x = wrap(x0).value;
    for (long i = 0; i < burn; ++i) x = wrap(lift(fam, t, x)).value;
    for (long i = 0; i < n; ++i) {
        eat(x, std::log(lift_d1(fam, x)), t);
        x = wrap(lift(fam, t, x)).value;
    }
}

// Point j >= 1 of the random trajectory is produced by parameter draw(j),
// matching the OrbitRecord convention params_used[i] = draw(i).
template <class Consumer>
void stream_random_orbit(const MapFamily& fam, const NoiseKernel& kernel, double x0,
                         long n, long burn, std::uint64_t seed, Consumer&& eat) {
    if (n < 1) throw DomainError("orbit: n must be >= 1");
    double x = wrap(x0).value;
    std::uint64_t j = 0;
    for (long i = 0; i < burn; ++i) {
        double t = kernel.draw(seed, ++j);
        fam.require_t(t);
        x = wrap(lift(fam, t, x)).value;
    }
    for (long i = 0; i < n; ++i) {
        eat(x, std::log(lift_d1(fam, x)), kernel.draw(seed, j));
        ++j;
        if (i + 1 < n) {
            double t = kernel.draw(seed, j);
            fam.require_t(t);
            x = wrap(lift(fam, t, x)).value;
        }
    }
}

/// Orbit of f_t from x0, recorded after discarding `burn` iterates.
OrbitRecord iterate_orbit(const MapFamily& fam, double t, CirclePoint x0, long n, long burn);

/// Random composition f_{t_n} o ... o f_{t_1} with i.i.d. parameters from
/// the kernel; deterministic given (seed, inputs).
OrbitRecord random_orbit(const MapFamily& fam, const NoiseKernel& kernel, CirclePoint x0,
                         long n, std::uint64_t seed);

/// Finite-n Lyapunov estimate (1/n) sum log_derivs.
double lyapunov_exponent(const OrbitRecord& rec);

/// Replay check: points[i+1] = f_{params_used[i+1]}(points[i]) within tol.
bool verify_record(const MapFamily& fam, const OrbitRecord& rec, double tol = 1e-12);

/// Entry events into [d0, a_pre] and per-entry lag until first arrival in
/// the exit window. Lag -1 marks a passage unfinished at record end.
struct ChannelStats {
    std::vector<long> entries;
    std::vector<long> exit_lags;
    long unfinished = 0;
};

ChannelStats channel_statistics(const MapFamily& fam, const OrbitRecord& rec,
                                CirclePoint d0, CirclePoint a_pre,
                                const CircleInterval& exit_window);

/// Default entry/exit windows around the saddle-node channel, built from
/// the verified hypotheses with local endpoints a = -offset, b = +offset.
struct ChannelWindows {
    CirclePoint d0;
    CirclePoint a_pre;
    CircleInterval entry;
    CircleInterval exit;
};

ChannelWindows default_channel_windows(const MapFamily& fam, double offset = 0.1);

} // namespace snlab
