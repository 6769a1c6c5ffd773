#pragma once

#include <vector>

#include "snlab/errors.hpp"

// The adapted saddle-node vector field X(t,x) = t + alpha x^2 + beta x t
// + gamma t^2 on the local chart [-1/2, 1/2], its time-s flow, hitting
// times, the channel reparametrizations sigma_k / t_k, and the transition
// maps T_k and their limit T_inf.

namespace snlab {

struct NormalFormField {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 0.0;
    double a = -0.1;  // entry section, a < 0
    double b = 0.1;   // exit section, b > 0

    static NormalFormField make(double alpha = 1.0, double beta = 0.0, double gamma = 0.0,
                                double a = -0.1, double b = 0.1);

    double velocity(double t, double x) const {
        return t + alpha * x * x + beta * x * t + gamma * t * t;
    }
};

inline constexpr double kChartBound = 0.5;

/// Time-s map X_s(t, x) by fixed-step RK4 (base step 1e-3, halved until two
/// successive refinements agree to 1e-10). s may be negative.
double flow(const NormalFormField& field, double t, double x, double s);

/// Time s (possibly negative) with flow(field, t, x, s) = target, found by
/// sign scan plus bisection; |flow(s) - target| <= 1e-10 at the result.
double hitting_time(const NormalFormField& field, double t, double x, double target);

/// Channel crossing time tau(t): X_tau(t, a) = b, or +infinity if the
/// crossing does not happen within s_cap (t too small or zero).
double crossing_time_capped(const NormalFormField& field, double t, double s_cap);

/// t_k(sigma): the unique t with crossing time k + sigma (bisection on the
/// strictly decreasing crossing-time-vs-t map).
double solve_t_for_sigma(const NormalFormField& field, int k, double sigma);

/// Domain of the transition maps, [X_{-1}(0,a), X_{+1}(0,a)].
void transition_domain(const NormalFormField& field, double& x_lo, double& x_hi);

/// T_k(sigma, x) = X_k(t_k(sigma), x).
double transition_map_k(const NormalFormField& field, int k, double sigma, double x);

/// T_inf(sigma, x) = X_{-sigma - t_a(0,x)}(0, b) with X_{t_a(0,x)}(0,x) = a;
/// the C-infinity limit of T_k along t_k(sigma).
double transition_map_limit(const NormalFormField& field, double sigma, double x);

/// min |d/dx T_inf| over a grid_n x grid_n grid of (sigma, x), by central
/// differences; bounded away from zero for admissible fields.
double transition_deriv_lower_bound(const NormalFormField& field, int grid_n);

/// sigma_k on [t_{k+1}*, t_k*], tabulated; strictly decreasing onto [0,1].
struct CrossingSolution {
    int k = 0;
    double t_k_star = 0.0;      // sigma_k(t_k_star) = 0
    double t_k1_star = 0.0;     // sigma_k(t_{k+1}_star) = 1
    std::vector<double> t;      // decreasing from t_k_star to t_k1_star
    std::vector<double> sigma;  // increasing from 0 to 1
};

CrossingSolution crossing_solution(const NormalFormField& field, int k, int n_tab = 33);

} // namespace snlab
