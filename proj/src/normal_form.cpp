#include "snlab/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace snlab {

NormalFormField NormalFormField::make(double alpha, double beta, double gamma,
                                      double a, double b) {
    if (!(alpha > 0.0)) throw DomainError("NormalFormField: alpha must be positive");
    if (!(a < 0.0 && b > 0.0)) throw DomainError("NormalFormField: need a < 0 < b");
    if (std::fabs(a) > kChartBound || std::fabs(b) > kChartBound)
        throw DomainError("NormalFormField: a, b must lie in the local chart");
    NormalFormField f{alpha, beta, gamma, a, b};
    // X(0, x) = alpha x^2 > 0 off 0 automatically; reject fields whose
    // higher-order t-terms create spurious rest points between a and b at
    // small t > 0 (velocity must stay positive along the channel).
    for (double t : {1e-6, 1e-4, 1e-2}) {
        for (int i = 0; i <= 100; ++i) {
            double x = a + (b - a) * i / 100.0;
            if (f.velocity(t, x) <= 0.0)
                throw DomainError("NormalFormField: velocity vanishes inside the channel");
        }
    }
    return f;
}

namespace {

constexpr double kBaseStep = 1e-3;
constexpr double kRefineTol = 1e-10;
constexpr int kMaxHalvings = 12;

// One RK4 pass at fixed step h (sign of s folded into h).
double rk4_span(const NormalFormField& f, double t, double x, double s, double h) {
    long n_steps = static_cast<long>(std::ceil(std::fabs(s) / h - 1e-12));
    if (n_steps < 1) n_steps = 1;
    double dt = s / static_cast<double>(n_steps);
    for (long i = 0; i < n_steps; ++i) {
        double k1 = f.velocity(t, x);
        double k2 = f.velocity(t, x + 0.5 * dt * k1);
        double k3 = f.velocity(t, x + 0.5 * dt * k2);
        double k4 = f.velocity(t, x + dt * k3);
        x += dt * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
        if (std::fabs(x) > kChartBound + 1e-9)
            throw TrajectoryEscapeError("flow: trajectory left the local chart [-1/2, 1/2]");
    }
    return x;
}

double flow_refined(const NormalFormField& f, double t, double x, double s) {
    if (s == 0.0) return x;
    double h = kBaseStep;
    double coarse = rk4_span(f, t, x, s, h);
    for (int r = 0; r < kMaxHalvings; ++r) {
        h *= 0.5;
        double fine = rk4_span(f, t, x, s, h);
        if (std::fabs(fine - coarse) < kRefineTol) return fine;
        coarse = fine;
    }
    throw StepFailureError("flow: integrator cannot meet tolerance");
}

} // namespace

double flow(const NormalFormField& field, double t, double x, double s) {
    if (std::fabs(x) > kChartBound + 1e-12)
        throw TrajectoryEscapeError("flow: initial point outside the local chart");
    return flow_refined(field, t, x, s);
}

double hitting_time(const NormalFormField& field, double t, double x, double target) {
    if (x == target) return 0.0;
    if (t == 0.0) {
        // The rest point at 0 is never crossed: x and target must lie on
        // the same side (and x itself must not be the rest point).
        bool separated = (x < 0.0 && target >= 0.0) || (x > 0.0 && target <= 0.0) ||
                         (x == 0.0);
        if (separated)
            throw UnreachableTargetError("hitting_time: 0 separates x from target at t=0");
    }
    double v = field.velocity(t, x);
    if (v == 0.0) throw UnreachableTargetError("hitting_time: start is a rest point");
    double dir = ((target > x) == (v > 0.0)) ? 1.0 : -1.0;

    // Expanding scan for a bracket, then bisection (from-scratch flow
    // evaluations; each result carries the refined-integrator accuracy).
    auto offset = [&](double s) { return flow(field, t, x, s) - target; };
    double lo = 0.0, f_lo = x - target;
    double step = 0.125, hi = 0.0, f_hi = 0.0;
    const double s_max = 1e4;
    bool bracketed = false;
    while (std::fabs(hi) < s_max) {
        hi = lo + dir * step;
        f_hi = offset(hi);
        if ((f_hi <= 0.0) != (f_lo <= 0.0) || f_hi == 0.0) {
            bracketed = true;
            break;
        }
        lo = hi;
        f_lo = f_hi;
        step *= 2.0;
    }
    if (!bracketed)
        throw UnreachableTargetError("hitting_time: target not reached within scan horizon");

    for (int i = 0; i < 80 && std::fabs(hi - lo) > 1e-12; ++i) {
        double mid = 0.5 * (lo + hi);
        double f_mid = offset(mid);
        if ((f_mid <= 0.0) == (f_lo <= 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double crossing_time_capped(const NormalFormField& field, double t, double s_cap) {
    // Single forward integration from a at fixed step, bracketing the first
    // passage of b within one step, then local bisection. Resolution is
    // checked by a halved-step pass.
    auto sweep = [&](double h) -> double {
        double x = field.a;
        double s = 0.0;
        while (s < s_cap) {
            double x_prev = x;
            double k1 = field.velocity(t, x);
            double k2 = field.velocity(t, x + 0.5 * h * k1);
            double k3 = field.velocity(t, x + 0.5 * h * k2);
            double k4 = field.velocity(t, x + h * k3);
            x += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
            s += h;
            if (std::fabs(x) > kChartBound + 1e-9)
                throw TrajectoryEscapeError("crossing_time: trajectory left the chart");
            if (x >= field.b) {
                // refine within [s-h, s] flowing from x_prev
                double lo = 0.0, hi = h;
                for (int i = 0; i < 60 && hi - lo > 1e-13; ++i) {
                    double mid = 0.5 * (lo + hi);
                    if (rk4_span(field, t, x_prev, mid, h) < field.b) lo = mid;
                    else hi = mid;
                }
                return s - h + 0.5 * (lo + hi);
            }
        }
        return std::numeric_limits<double>::infinity();
    };
    double coarse = sweep(kBaseStep);
    double fine = sweep(0.5 * kBaseStep);
    if (std::isinf(coarse) && std::isinf(fine)) return coarse;
    if (std::fabs(fine - coarse) > 1e-9 * (1.0 + std::fabs(fine))) {
        double h = 0.25 * kBaseStep;
        for (int r = 0; r < 6; ++r, h *= 0.5) {
            coarse = fine;
            fine = sweep(h);
            if (std::fabs(fine - coarse) <= 1e-9 * (1.0 + std::fabs(fine))) return fine;
        }
        throw StepFailureError("crossing_time: integrator cannot meet tolerance");
    }
    return fine;
}

double solve_t_for_sigma(const NormalFormField& field, int k, double sigma) {
    if (k < 1) throw DomainError("solve_t_for_sigma: k must be >= 1");
    if (!(sigma >= 0.0 && sigma <= 1.0))
        throw DomainError("solve_t_for_sigma: sigma must lie in [0,1]");
    const double tau_target = static_cast<double>(k) + sigma;
    const double s_cap = tau_target + 2.0;

    // Crossing time decreases in t. Find t_hi with tau(t_hi) < target.
    double t_hi = 1e-3;
    while (crossing_time_capped(field, t_hi, s_cap) > tau_target) {
        if (t_hi >= 0.5)
            throw NoSolutionError("solve_t_for_sigma: crossing slower than k + sigma for every admissible t");
        t_hi = std::min(2.0 * t_hi, 0.5);
    }
    // And t_lo with tau(t_lo) > target.
    double t_lo = t_hi;
    while (!(crossing_time_capped(field, t_lo, s_cap) > tau_target)) {
        t_lo *= 0.25;
        if (t_lo < 1e-15)
            throw NoSolutionError("solve_t_for_sigma: no parameter reaches the requested crossing time");
    }
    for (int i = 0; i < 100 && t_hi - t_lo > 1e-12 * std::max(1.0, t_hi); ++i) {
        double mid = 0.5 * (t_lo + t_hi);
        if (crossing_time_capped(field, mid, s_cap) > tau_target) t_lo = mid;
        else t_hi = mid;
    }
    return 0.5 * (t_lo + t_hi);
}

void transition_domain(const NormalFormField& field, double& x_lo, double& x_hi) {
    x_lo = flow(field, 0.0, field.a, -1.0);
    x_hi = flow(field, 0.0, field.a, 1.0);
}

double transition_map_k(const NormalFormField& field, int k, double sigma, double x) {
    double x_lo, x_hi;
    transition_domain(field, x_lo, x_hi);
    if (x < x_lo - 1e-12 || x > x_hi + 1e-12)
        throw DomainError("transition_map: x outside [f0^{-1}(a), f0(a)]");
    double t = solve_t_for_sigma(field, k, sigma);
    return flow(field, t, x, static_cast<double>(k));
}

double transition_map_limit(const NormalFormField& field, double sigma, double x) {
    double x_lo, x_hi;
    transition_domain(field, x_lo, x_hi);
    if (x < x_lo - 1e-12 || x > x_hi + 1e-12)
        throw DomainError("transition_map: x outside [f0^{-1}(a), f0(a)]");
    double t_a = hitting_time(field, 0.0, x, field.a);
    return flow(field, 0.0, field.b, -(sigma + t_a));
}

double transition_deriv_lower_bound(const NormalFormField& field, int grid_n) {
    if (grid_n < 2) throw DomainError("transition_deriv_lower_bound: grid_n must be >= 2");
    double x_lo, x_hi;
    transition_domain(field, x_lo, x_hi);
    double hx = 1e-6 * (x_hi - x_lo);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < grid_n; ++i) {
        double sigma = static_cast<double>(i) / (grid_n - 1);
        for (int j = 0; j < grid_n; ++j) {
            double x = x_lo + (x_hi - x_lo) * (j + 0.5) / grid_n;
            double tp = transition_map_limit(field, sigma, x + hx);
            double tm = transition_map_limit(field, sigma, x - hx);
            best = std::min(best, std::fabs(tp - tm) / (2.0 * hx));
        }
    }
    return best;
}

CrossingSolution crossing_solution(const NormalFormField& field, int k, int n_tab) {
    if (n_tab < 2) throw DomainError("crossing_solution: need at least 2 table nodes");
    CrossingSolution cs;
    cs.k = k;
    cs.t_k_star = solve_t_for_sigma(field, k, 0.0);
    cs.t_k1_star = solve_t_for_sigma(field, k, 1.0);
    const double s_cap = static_cast<double>(k) + 3.0;
    cs.t.resize(n_tab);
    cs.sigma.resize(n_tab);
    for (int i = 0; i < n_tab; ++i) {
        double t = cs.t_k_star + (cs.t_k1_star - cs.t_k_star) * i / (n_tab - 1);
        cs.t[i] = t;
        cs.sigma[i] = crossing_time_capped(field, t, s_cap) - static_cast<double>(k);
    }
    return cs;
}

} // namespace snlab
