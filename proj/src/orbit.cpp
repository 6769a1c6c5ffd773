#include "snlab/orbit.hpp"

#include <cmath>

namespace snlab {

NoiseKernel NoiseKernel::uniform(double eps, double t_0_cap) {
    if (!(eps > 0.0)) throw DomainError("NoiseKernel: epsilon must be positive");
    if (eps > t_0_cap) throw DomainError("NoiseKernel: support exceeds [0, t_0]");
    return NoiseKernel{eps, 0.0, t_0_cap};
}

NoiseKernel NoiseKernel::uniform_range(double lo, double hi, double t_0_cap) {
    if (!(lo >= 0.0 && hi > lo)) throw DomainError("NoiseKernel: need 0 <= lo < hi");
    if (hi > t_0_cap) throw DomainError("NoiseKernel: support exceeds [0, t_0]");
    return NoiseKernel{hi - lo, lo, t_0_cap};
}

OrbitRecord iterate_orbit(const MapFamily& fam, double t, CirclePoint x0, long n, long burn) {
    OrbitRecord rec;
    rec.points.reserve(n);
    rec.log_derivs.reserve(n);
    rec.params_used.reserve(n);
    stream_orbit(fam, t, x0.value, n, burn, [&](double x, double ld, double tp) {
        rec.points.push_back(x);
        rec.log_derivs.push_back(ld);
        rec.params_used.push_back(tp);
    });
    return rec;
}

OrbitRecord random_orbit(const MapFamily& fam, const NoiseKernel& kernel, CirclePoint x0,
                         long n, std::uint64_t seed) {
    if (n < 1) throw DomainError("random_orbit: n must be >= 1");
    OrbitRecord rec;
    rec.seed = seed;
    rec.points.reserve(n);
    rec.log_derivs.reserve(n);
    rec.params_used.reserve(n);
    double x = wrap(x0.value).value;
    for (long i = 0; i < n; ++i) {
        double t = kernel.draw(seed, static_cast<std::uint64_t>(i));
        fam.require_t(t);
        rec.points.push_back(x);
        rec.log_derivs.push_back(std::log(lift_d1(fam, x)));
        rec.params_used.push_back(t);
        if (i + 1 < n) {
            double t_next = kernel.draw(seed, static_cast<std::uint64_t>(i + 1));
            fam.require_t(t_next);
            x = wrap(lift(fam, t_next, x)).value;
        }
    }
    return rec;
}

double lyapunov_exponent(const OrbitRecord& rec) {
    if (rec.points.empty()) throw DomainError("lyapunov_exponent: empty record");
    double acc = 0.0;
    for (double v : rec.log_derivs) acc += v;
    return acc / static_cast<double>(rec.log_derivs.size());
}

bool verify_record(const MapFamily& fam, const OrbitRecord& rec, double tol) {
    if (rec.points.size() != rec.log_derivs.size() ||
        rec.points.size() != rec.params_used.size())
        return false;
    for (std::size_t i = 0; i + 1 < rec.points.size(); ++i) {
        double fx = wrap(lift(fam, rec.params_used[i + 1], rec.points[i])).value;
        if (circle_dist(CirclePoint{fx}, CirclePoint{rec.points[i + 1]}) > tol) return false;
    }
    return true;
}

ChannelStats channel_statistics(const MapFamily& fam, const OrbitRecord& rec,
                                CirclePoint d0, CirclePoint a_pre,
                                const CircleInterval& exit_window) {
    (void)fam;
    double span = a_pre.value - d0.value;
    span -= std::floor(span);
    CircleInterval entry(d0, span);

    ChannelStats out;
    const std::size_t n = rec.points.size();
    bool was_inside = false;
    for (std::size_t i = 0; i < n; ++i) {
        bool inside = entry.contains(CirclePoint{rec.points[i]});
        if (inside && !was_inside) {
            out.entries.push_back(static_cast<long>(i));
            long lag = -1;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (exit_window.contains(CirclePoint{rec.points[j]})) {
                    lag = static_cast<long>(j - i);
                    break;
                }
            }
            out.exit_lags.push_back(lag);
            if (lag < 0) ++out.unfinished;
        }
        was_inside = inside;
    }
    return out;
}

namespace {
// Preimage under f_0 restricted to a monotone lift stretch [lo,hi].
double invert_branch(const MapFamily& fam, double target_lift, double lo, double hi) {
    for (int i = 0; i < 100 && hi - lo > 1e-15; ++i) {
        double mid = 0.5 * (lo + hi);
        if (lift(fam, 0.0, mid) < target_lift) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}
} // namespace

ChannelWindows default_channel_windows(const MapFamily& fam, double offset) {
    HypothesisReport rep = verify_hypotheses(fam);
    if (!rep.saddle_node_ok || !rep.has_source)
        throw DomainError("default_channel_windows: family has no saddle-node channel");
    double s = rep.source_s.value;

    // Left edge of the contraction region {f_0' < 1} inside W_0.
    double c_lo = s;
    const int grid = 200000;
    for (int i = 0; i < grid; ++i) {
        double x = s + (1.0 - s) * static_cast<double>(i) / grid;
        if (lift_d1(fam, x) < 1.0) {
            c_lo = x;
            break;
        }
    }

    ChannelWindows w;
    w.d0 = wrap(0.5 * (s + c_lo));

    // a = -offset on the local chart is the circle point 1-offset inside W_0;
    // its preimage through the W_0 branch of f_0 (lift target 1-offset+1).
    double a_circ = 1.0 - offset;
    w.a_pre = wrap(invert_branch(fam, a_circ + 1.0, s, 1.0));
    double span = w.a_pre.value - w.d0.value;
    span -= std::floor(span);
    w.entry = CircleInterval(w.d0, span);

    // Exit window [f_0^{-1}(b), f_0(b)] around b = +offset.
    double b_pre = invert_branch(fam, offset, 0.0, s);
    double b_img = lift(fam, 0.0, offset);
    w.exit = CircleInterval(wrap(b_pre), b_img - b_pre);
    return w;
}

} // namespace snlab
