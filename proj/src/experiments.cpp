#include "snlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "snlab/errors.hpp"
#include "snlab/parallel.hpp"
#include "snlab/rng.hpp"

namespace snlab {

// ---------------------------------------------------------------------------
// basin_fraction
// ---------------------------------------------------------------------------

namespace {

enum class StayRegion { ImmediateBasin, WholeCircle, DeltaBall };

struct BasinSetup {
    StayRegion stay;
    CircleInterval w0;
};

BasinSetup basin_setup(const MapFamily& fam) {
    HypothesisReport rep = verify_hypotheses(fam);
    if (rep.saddle_node_ok && rep.has_source)
        return {StayRegion::ImmediateBasin, rep.immediate_basin};
    if (rep.saddle_node_ok)
        return {StayRegion::WholeCircle, rep.immediate_basin};
    return {StayRegion::DeltaBall, CircleInterval{}};
}

} // namespace

double basin_fraction(const MapFamily& fam, long n_grid, long n_iter, double delta) {
    if (n_grid < 1 || n_iter < 1 || !(delta > 0.0))
        throw DomainError("basin_fraction: bad settings");
    const BasinSetup setup = basin_setup(fam);
    const CirclePoint zero{0.0};
    const bool exact_doubling = fam.kind == FamilyKind::DoublingOracle;
    const std::uint64_t M = detail::kDoublingModulus;

    auto stays = [&](double x) {
        switch (setup.stay) {
            case StayRegion::ImmediateBasin: return setup.w0.contains(CirclePoint{x});
            case StayRegion::WholeCircle: return true;
            case StayRegion::DeltaBall: return circle_dist(CirclePoint{x}, zero) <= delta;
        }
        return false;
    };

    std::vector<std::uint8_t> hit(n_grid, 0);
    parallel_for(static_cast<std::size_t>(n_grid), [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            double x = static_cast<double>(i) / n_grid;
            std::uint64_t k_state = 0;
            if (exact_doubling)
                k_state = static_cast<std::uint64_t>(x * static_cast<double>(M) + 0.5) % M;
            auto step = [&]() {
                if (exact_doubling) {
                    k_state <<= 1;
                    if (k_state >= M) k_state -= M;
                    x = static_cast<double>(k_state) / static_cast<double>(M);
                } else {
                    x = wrap(lift(fam, 0.0, x)).value;
                }
            };
            long k = 0;
            while (k <= n_iter) {
                if (circle_dist(CirclePoint{x}, zero) <= delta) {
                    bool ok = true;
                    for (int j = 0; j < 100; ++j) {
                        step();
                        ++k;
                        if (!stays(x)) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        hit[i] = 1;
                        break;
                    }
                } else {
                    step();
                    ++k;
                }
            }
        }
    });
    long count = 0;
    for (auto h : hit) count += h;
    return static_cast<double>(count) / static_cast<double>(n_grid);
}

// ---------------------------------------------------------------------------
// expansion_certificate
// ---------------------------------------------------------------------------

namespace {

struct DerivBounds {
    double sup_d1;       // certified sup f'
    double sup_ratio;    // certified sup |f''/f'|
};

// Grid maxima inflated by first-derivative Lipschitz margins.
DerivBounds certified_bounds(const MapFamily& fam) {
    const long g = 1000000;
    const double h = 1.0 / g;
    double sup1 = 0.0, inf1 = 1e300, sup2 = 0.0, sup3 = 0.0, supr = 0.0;
    for (long i = 0; i < g; ++i) {
        double x = (i + 0.5) * h;
        double d1 = lift_d1(fam, x);
        double d2 = std::fabs(lift_d2(fam, x));
        double d3 = std::fabs(lift_d3(fam, x));
        sup1 = std::max(sup1, d1);
        inf1 = std::min(inf1, d1);
        sup2 = std::max(sup2, d2);
        sup3 = std::max(sup3, d3);
        supr = std::max(supr, d2 / d1);
    }
    DerivBounds b;
    b.sup_d1 = sup1 + sup2 * h / 2.0;
    double ratio_lip = sup3 / inf1 + supr * supr;  // |d/dx (f''/f')| bound
    b.sup_ratio = supr + ratio_lip * h / 2.0;
    return b;
}

// Minimum over a midpoint grid of the running Birkhoff sums of log f',
// for every depth up to N_max. Chunked and parallel; exact min reduction.
std::vector<double> block_min_table(const MapFamily& fam, double t, int N_max, long grid_n) {
    const std::size_t chunk = 1 << 20;
    const std::size_t n_chunks = (static_cast<std::size_t>(grid_n) + chunk - 1) / chunk;
    std::vector<std::vector<double>> chunk_mins(n_chunks);

    parallel_for(n_chunks, [&](std::size_t clo, std::size_t chi) {
        std::vector<double> x, acc;
        for (std::size_t ci = clo; ci < chi; ++ci) {
            std::size_t lo = ci * chunk;
            std::size_t hi = std::min<std::size_t>(grid_n, lo + chunk);
            std::size_t m = hi - lo;
            x.resize(m);
            acc.assign(m, 0.0);
            for (std::size_t j = 0; j < m; ++j)
                x[j] = (static_cast<double>(lo + j) + 0.5) / static_cast<double>(grid_n);
            std::vector<double> mins(N_max);
            const bool canonical = fam.kind == FamilyKind::CanonicalExpanding;
            const double c = fam.param;
            for (int N = 0; N < N_max; ++N) {
                double mn = std::numeric_limits<double>::infinity();
                if (canonical) {
                    for (std::size_t j = 0; j < m; ++j) {
                        double xt = x[j];
                        double si, co;
#if defined(__GLIBC__)
                        ::sincos(kTwoPi * xt, &si, &co);
#else
                        si = std::sin(kTwoPi * xt);
                        co = std::cos(kTwoPi * xt);
#endif
                        double a = acc[j] + std::log(2.0 - co + kTwoPi * c * si);
                        acc[j] = a;
                        if (a < mn) mn = a;
                        double y = 2.0 * xt - si / kTwoPi + c * (1.0 - co) + t;
                        x[j] = y - std::floor(y);
                    }
                } else {
                    for (std::size_t j = 0; j < m; ++j) {
                        double a = acc[j] + std::log(lift_d1(fam, x[j]));
                        acc[j] = a;
                        if (a < mn) mn = a;
                        x[j] = wrap(lift(fam, t, x[j])).value;
                    }
                }
                mins[N] = mn;
            }
            chunk_mins[ci] = std::move(mins);
        }
    });

    std::vector<double> out(N_max, std::numeric_limits<double>::infinity());
    for (const auto& mins : chunk_mins)
        for (int N = 0; N < N_max; ++N) out[N] = std::min(out[N], mins[N]);
    return out;
}

double lipschitz_margin(const DerivBounds& b, int N, double h) {
    double powSN = std::pow(b.sup_d1, N);
    return b.sup_ratio * (powSN - 1.0) / (b.sup_d1 - 1.0) * h / 2.0;
}

} // namespace

double min_block_log_deriv(const MapFamily& fam, double t, int N, long grid_n) {
    fam.require_t(t);
    auto tab = block_min_table(fam, t, N, grid_n);
    return tab[N - 1];
}

ExpansionCertificate expansion_certificate(const MapFamily& fam, double t,
                                           int N_max, long grid_n) {
    fam.require_t(t);
    if (N_max < 1 || grid_n < 2) throw DomainError("expansion_certificate: bad settings");
    const DerivBounds bounds = certified_bounds(fam);
    const double h = 1.0 / static_cast<double>(grid_n);

    auto decide = [&](const std::vector<double>& mins) -> int {
        for (int N = 1; N <= static_cast<int>(mins.size()); ++N) {
            double margin = lipschitz_margin(bounds, N, h);
            if (std::isfinite(margin) && mins[N - 1] - margin > 0.0) return N;
        }
        return 0;
    };

    // Coarse scan first: a grid refinement can only lower the minima, so an
    // N that fails on the coarse grid fails on the fine grid too.
    const long coarse_n = std::min<long>(grid_n, 200000);
    auto coarse = block_min_table(fam, t, N_max, coarse_n);
    int n_candidate = decide(coarse);
    if (n_candidate == 0)
        throw CertificateFailedError("expansion_certificate: no N <= N_max clears the margin");

    std::vector<double> fine;
    if (coarse_n == grid_n) {
        fine = std::move(coarse);
    } else {
        fine = block_min_table(fam, t, n_candidate, grid_n);
        if (decide(fine) == 0 && n_candidate < N_max)
            fine = block_min_table(fam, t, N_max, grid_n);
    }
    int N = decide(fine);
    if (N == 0)
        throw CertificateFailedError("expansion_certificate: no N <= N_max clears the margin");

    ExpansionCertificate cert;
    cert.N = N;
    cert.grid_n = grid_n;
    cert.grid_min = fine[N - 1];
    cert.margin = lipschitz_margin(bounds, N, h);
    cert.e0 = (cert.grid_min - cert.margin) / N;
    return cert;
}

// ---------------------------------------------------------------------------
// distortion_audit
// ---------------------------------------------------------------------------

namespace {

// Arcs of [0, len] whose image under u -> (pos + u) mod 1 lies in the
// interval [b, b+lw] mod 1; returns up to three (lo,hi) offset pairs
// (len may exceed 1 transiently on the last audited step).
int overlap_arcs(double pos, double len, double b, double lw, double out[3][2]) {
    double r = b - pos;
    r -= std::floor(r);
    int cnt = 0;
    for (double base : {r - 1.0, r, r + 1.0}) {
        double lo = std::max(0.0, base);
        double hi = std::min(len, base + lw);
        if (hi > lo) {
            out[cnt][0] = lo;
            out[cnt][1] = hi;
            ++cnt;
        }
    }
    return cnt;
}

struct AuditRegion {
    double w0_start, w0_len;  // stand-in basin as a circle interval
};

AuditRegion audit_region(const MapFamily& fam, const HypothesisReport& rep) {
    if (rep.saddle_node_ok && rep.has_source)
        return {rep.source_s.value, 1.0 - rep.source_s.value};
    if (!rep.saddle_node_ok)
        return {0.8, 0.4};  // ball of radius 0.2 at 0 (expanding-oracle stand-in)
    throw DomainError("distortion_audit: family has no expanding complement region");
}

} // namespace

DistortionReport distortion_audit(const MapFamily& fam, int n_intervals,
                                  double interval_len, std::uint64_t seed) {
    if (n_intervals < 1 || !(interval_len > 0.0 && interval_len <= 0.25))
        throw DomainError("distortion_audit: bad settings");
    HypothesisReport rep = verify_hypotheses(fam);
    AuditRegion reg = audit_region(fam, rep);
    const double ell = interval_len;

    // Positions on the lift; the basin region is [w0s, w0s + w0l] mod 1.
    const double w0s = reg.w0_start;
    const double w0l = reg.w0_len;

    // eta0: halve from 0.1 until intervals of length ell hanging outward
    // from both boundary points of W(eta) expand in the mean.
    auto mean_deriv = [&](double lift_lo, double len) {
        return (lift(fam, 0.0, lift_lo + len) - lift(fam, 0.0, lift_lo)) / len;
    };
    double eta0 = 0.1;
    bool ok = false;
    for (int halve = 0; halve < 60; ++halve) {
        if (eta0 < 0.49 * w0l) {
            double lo_edge = w0s + eta0;          // boundary toward the source side
            double hi_edge = w0s + w0l - eta0;     // boundary toward 0
            ok = mean_deriv(lo_edge - ell, ell) > 1.0 && mean_deriv(hi_edge, ell) > 1.0;
            if (ok) break;
        }
        eta0 *= 0.5;
    }
    if (!ok) throw DomainError("distortion_audit: could not satisfy the mean-expansion condition");

    // W(eta0) and its complement arc (contains the fixed point 0).
    const double weta_start = w0s + eta0;      // lift
    const double weta_len = w0l - 2.0 * eta0;
    const double arc_start = weta_start + weta_len;  // complement, through 0
    const double arc_len = 1.0 - weta_len;

    // sigma of the mean-expansion bound: min integral mean of f' over
    // subintervals of the complement with length >= ell.
    double sigma = std::numeric_limits<double>::infinity();
    {
        const int starts = 4000;
        std::vector<double> lens;
        for (double L = ell; L < arc_len; L *= 2.0) lens.push_back(L);
        lens.push_back(arc_len);
        for (double L : lens) {
            for (int i = 0; i <= starts; ++i) {
                double u = arc_start + (arc_len - L) * static_cast<double>(i) / starts;
                sigma = std::min(sigma, mean_deriv(u, L));
            }
        }
    }
    if (!(sigma > 1.0))
        throw DomainError("distortion_audit: measured sigma is not > 1");

    // Analytic C_0 = sup|f''/f'| / (1 - 1/sigma).
    double sup_ratio = 0.0;
    {
        const long g = 1000000;
        for (long i = 0; i < g; ++i) {
            double x = (i + 0.5) / static_cast<double>(g);
            sup_ratio = std::max(sup_ratio, std::fabs(lift_d2(fam, x)) / lift_d1(fam, x));
        }
    }
    double c0 = sup_ratio / (1.0 - 1.0 / sigma);

    DistortionReport out;
    out.sigma_used = sigma;
    out.eta0 = eta0;
    out.C0_bound = c0;

    const long k_cap = 1000000;
    for (int s_i = 0; s_i < n_intervals; ++s_i) {
        double u0 = arc_start + (arc_len - ell) * rng_uniform(seed, 11, s_i);
        double pos = wrap(u0).value;
        double len = ell;
        double log_x = 0.0, log_y = 0.0;
        long k1 = -1;
        for (long k = 0; k <= k_cap; ++k) {
            double arcs[3][2];
            // An image of length >= 1 wraps the circle and certainly meets
            // W(eta0); otherwise test the overlap directly.
            if (len >= 1.0 ||
                overlap_arcs(pos, len, wrap(weta_start).value, weta_len, arcs) > 0) {
                k1 = k;
                break;
            }
            log_x += std::log(lift_d1(fam, pos));
            log_y += std::log(lift_d1(fam, wrap(pos + len).value));
            double flo = lift(fam, 0.0, pos);
            len = lift(fam, 0.0, pos + len) - flo;
            pos = wrap(flo).value;
        }
        if (k1 < 0)
            throw IntervalNeverEscapesError("distortion_audit: k1 exceeded 1e6 (sampling artifact)");
        out.worst_k1 = std::max(out.worst_k1, k1);
        out.max_observed = std::max(out.max_observed, std::fabs(log_x - log_y));

        // Fraction of the sample interval that g^{k1} sends into W_0:
        // pull the overlap endpoints back through the monotone composition.
        double arcs2[3][2];
        int cnt = overlap_arcs(pos, len, wrap(w0s).value, w0l, arcs2);
        double fall_len = 0.0;
        // Offset after k1 steps of the point at offset xi in [0, ell].
        auto image_offset = [&](double xi) {
            double p = u0, l = xi;
            for (long k = 0; k < k1; ++k) {
                double flo = lift(fam, 0.0, p);
                l = lift(fam, 0.0, p + l) - flo;
                p = wrap(flo).value;
            }
            return l;
        };
        for (int a = 0; a < cnt; ++a) {
            double pre[2];
            for (int e = 0; e < 2; ++e) {
                double target = arcs2[a][e];
                double lo = 0.0, hi = ell;
                for (int it = 0; it < 50; ++it) {
                    double mid = 0.5 * (lo + hi);
                    if (image_offset(mid) < target) lo = mid;
                    else hi = mid;
                }
                pre[e] = 0.5 * (lo + hi);
            }
            fall_len += pre[1] - pre[0];
        }
        double surviving = 1.0 - fall_len / ell;
        out.gamma0_estimate = std::max(out.gamma0_estimate, surviving);
    }
    return out;
}

// ---------------------------------------------------------------------------
// sweeps
// ---------------------------------------------------------------------------

namespace {

struct McSummary {
    EmpiricalMeasure hist;
    double lyapunov = 0.0;
    EntropyEstimate entropy;
};

class BlockEntropyAccum {
public:
    BlockEntropyAccum(const SymbolicPartition& xi, int max_block)
        : xi_(xi), max_block_(max_block) {
        bits_ = 1;
        while ((1 << bits_) < xi_.atoms()) ++bits_;
        if (bits_ * max_block_ > 62) throw DomainError("entropy: block too long to pack");
        mask_full_ = (1ULL << (max_block_ * bits_)) - 1;
        mask_prev_ = max_block_ == 1 ? 0 : ((1ULL << ((max_block_ - 1) * bits_)) - 1);
        full_.reserve(1 << 16);
        prev_.reserve(1 << 16);
    }

    void eat(double x) {
        key_ = ((key_ << bits_) | static_cast<std::uint64_t>(xi_.symbol(x))) & mask_full_;
        ++count_;
        if (count_ >= max_block_) {
            ++full_[key_];
            if (max_block_ > 1) ++prev_[key_ & mask_prev_];
        }
    }

    EntropyEstimate finish() const {
        auto block_entropy = [](const std::unordered_map<std::uint64_t, std::uint32_t>& m) {
            double total = 0.0;
            for (const auto& kv : m) total += kv.second;
            double h = 0.0;
            for (const auto& kv : m) {
                double p = kv.second / total;
                h -= p * std::log(p);
            }
            return h;
        };
        EntropyEstimate e;
        e.value = block_entropy(full_) - (max_block_ > 1 ? block_entropy(prev_) : 0.0);
        e.undersampled = full_.size() > 0.2 * static_cast<double>(count_);
        return e;
    }

private:
    SymbolicPartition xi_;
    int max_block_;
    int bits_;
    std::uint64_t mask_full_ = 0, mask_prev_ = 0;
    std::uint64_t key_ = 0;
    long count_ = 0;
    std::unordered_map<std::uint64_t, std::uint32_t> full_, prev_;
};

template <class Streamer>
McSummary mc_summary(Streamer&& run, int bins, const SymbolicPartition& xi, int max_block) {
    std::vector<double> counts(bins, 0.0);
    double lyap = 0.0;
    long n = 0;
    BlockEntropyAccum ent(xi, max_block);
    run([&](double x, double ld, double) {
        int b = static_cast<int>(x * bins);
        counts[b >= bins ? bins - 1 : b] += 1.0;
        lyap += ld;
        ent.eat(x);
        ++n;
    });
    McSummary out{histogram_measure_raw(counts), lyap / static_cast<double>(n), ent.finish()};
    return out;
}

SweepRow make_row(double param, const MapFamily& fam, double deriv_t,
                  const DensityResult& dens, const McSummary& mc) {
    SweepRow row;
    row.param = param;
    row.lyapunov = mc.lyapunov;
    row.entropy_symbolic = mc.entropy.value;
    row.entropy_undersampled = mc.entropy.undersampled;
    row.ulam_converged = dens.converged;
    const EmpiricalMeasure& mu = dens.converged ? dens.density : mc.hist;
    row.w1_to_dirac = w1_to_dirac(mu, CirclePoint{0.0});
    row.entropy_rhs = integrate_log_deriv(mu, fam, deriv_t);
    row.min_density = *std::min_element(mu.weights.begin(), mu.weights.end());
    row.mc_vs_ulam_w1 = dens.converged ? w1_circle(mc.hist, dens.density) : 0.0;
    return row;
}

std::vector<double> require_positive_decreasing(const std::vector<double>& v, const char* what) {
    if (v.empty()) throw DomainError(std::string(what) + ": empty parameter list");
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] > 0.0)) throw DomainError(std::string(what) + ": parameters must be positive");
        if (i > 0 && !(v[i] < v[i - 1]))
            throw DomainError(std::string(what) + ": parameters must be strictly decreasing");
    }
    return v;
}

} // namespace

SweepResult statistical_sweep(const MapFamily& fam, const std::vector<double>& t_values,
                              const SweepSettings& s) {
    require_positive_decreasing(t_values, "statistical_sweep");
    SweepResult res;
    SymbolicPartition xi = SymbolicPartition::uniform(s.entropy_atoms);
    for (std::size_t r = 0; r < t_values.size(); ++r) {
        double t = t_values[r];
        SweepRow row;
        try {
            std::uint64_t seed_row = rng_subseed(s.seed, r);
            TransferMatrix P = build_ulam(fam, t, s.bins);
            DensityResult dens = invariant_density(P, s.ulam_tol, s.power_iter_max);
            double x0 = rng_uniform(seed_row, 1, 0);
            McSummary mc = mc_summary(
                [&](auto&& eat) { stream_orbit(fam, t, x0, s.mc_n, s.mc_burn, eat); },
                s.bins, xi, s.entropy_max_block);
            row = make_row(t, fam, t, dens, mc);
        } catch (const Error& e) {
            row.param = t;
            row.failed = true;
            row.error = e.what();
        }
        res.rows.push_back(std::move(row));
    }
    return res;
}

SweepResult stochastic_sweep(const MapFamily& fam, const std::vector<double>& eps_values,
                             const SweepSettings& s) {
    require_positive_decreasing(eps_values, "stochastic_sweep");
    SweepResult res;
    SymbolicPartition xi = SymbolicPartition::uniform(s.entropy_atoms);
    for (std::size_t r = 0; r < eps_values.size(); ++r) {
        double eps = eps_values[r];
        SweepRow row;
        try {
            std::uint64_t seed_row = rng_subseed(s.seed, r);
            NoiseKernel kernel = NoiseKernel::uniform(eps, fam.t0);
            TransferMatrix P = averaged_ulam(fam, kernel, s.bins, s.quad_m);
            DensityResult dens = invariant_density(P, s.ulam_tol, s.power_iter_max);
            double x0 = rng_uniform(seed_row, 1, 0);
            McSummary mc = mc_summary(
                [&](auto&& eat) {
                    stream_random_orbit(fam, kernel, x0, s.mc_n, s.mc_burn, seed_row, eat);
                },
                s.bins, xi, s.entropy_max_block);
            // Entropy-Formula right-hand side against f_0 (eq. for mu^eps).
            row = make_row(eps, fam, 0.0, dens, mc);
        } catch (const Error& e) {
            row.param = eps;
            row.failed = true;
            row.error = e.what();
        }
        res.rows.push_back(std::move(row));
    }
    return res;
}

SweepResult homeo_sweep(const MapFamily& fam, const std::vector<double>& values,
                        HomeoMode mode, const SweepSettings& s) {
    if (fam.kind != FamilyKind::ArnoldHomeo)
        throw DomainError("homeo_sweep: requires the arnold family");
    SweepSettings hs = s;
    hs.power_iter_max = s.homeo_power_iter_max;
    return mode == HomeoMode::Deterministic ? statistical_sweep(fam, values, hs)
                                            : stochastic_sweep(fam, values, hs);
}

} // namespace snlab
