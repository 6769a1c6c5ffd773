#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snlab/family.hpp"
#include "snlab/measure.hpp"
#include "snlab/orbit.hpp"
#include "snlab/ulam.hpp"

// Experiment drivers: basin measure, uniform-expansion certificates,
// bounded-distortion audit, and the statistical / stochastic /
// homeomorphism stability sweeps.

namespace snlab {

/// Fraction of an n_grid uniform grid whose f_0-orbit comes within delta of
/// the fixed point 0 by iterate n_iter and then stays in the basin region
/// (W_0 when the family has one, the delta-ball otherwise) for 100 steps.
double basin_fraction(const MapFamily& fam, long n_grid, long n_iter, double delta);

struct ExpansionCertificate {
    int N = 0;
    double e0 = 0.0;
    double grid_min = 0.0;  // min over the grid of log|(f_t^N)'|
    double margin = 0.0;    // Lipschitz safety margin L_N h/2
    long grid_n = 0;
};

/// Least N <= N_max whose grid minimum of log|(f_t^N)'| clears the
/// chain-rule Lipschitz margin; throws CertificateFailedError otherwise
/// (always at t = 0, where the saddle-node blocks every N).
ExpansionCertificate expansion_certificate(const MapFamily& fam, double t,
                                           int N_max, long grid_n);

/// Independent recheck helper: min over a grid of log|(f_t^N)'|.
double min_block_log_deriv(const MapFamily& fam, double t, int N, long grid_n);

struct DistortionReport {
    double C0_bound = 0.0;
    double max_observed = 0.0;
    double sigma_used = 0.0;
    double gamma0_estimate = 0.0;
    double eta0 = 0.0;
    long worst_k1 = 0;
};

/// Audit of the bounded-distortion estimate: samples escaping intervals,
/// iterates them to their first meeting with W(eta0), and compares endpoint
/// derivative-ratio logs with the analytic bound C_0.
DistortionReport distortion_audit(const MapFamily& fam, int n_intervals,
                                  double interval_len = 1e-3, std::uint64_t seed = 1);

struct SweepSettings {
    int bins = 1024;
    long mc_n = 10000000;
    long mc_burn = 1000;
    int quad_m = 16;
    double ulam_tol = 1e-12;
    long power_iter_max = 100000;
    long homeo_power_iter_max = 5000;
    int entropy_atoms = 7;  // uniform partition; diameter 1/7 < delta_1
    int entropy_max_block = 10;
    std::uint64_t seed = 1;
};

struct SweepRow {
    double param = 0.0;
    double w1_to_dirac = 0.0;
    double lyapunov = 0.0;
    double entropy_rhs = 0.0;
    double entropy_symbolic = 0.0;
    double mc_vs_ulam_w1 = 0.0;
    double min_density = 0.0;
    bool ulam_converged = false;
    bool entropy_undersampled = false;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Deterministic unfolding sweep: mu_t by Ulam and by Monte Carlo per t.
SweepResult statistical_sweep(const MapFamily& fam, const std::vector<double>& t_values,
                              const SweepSettings& s);

/// Random perturbation sweep: mu^eps by averaged Ulam and by random-orbit
/// Monte Carlo per eps.
SweepResult stochastic_sweep(const MapFamily& fam, const std::vector<double>& eps_values,
                             const SweepSettings& s);

enum class HomeoMode { Deterministic, Random };

/// Same pipelines restricted to the degree-1 family; Ulam non-convergence
/// falls back to Monte Carlo only.
SweepResult homeo_sweep(const MapFamily& fam, const std::vector<double>& values,
                        HomeoMode mode, const SweepSettings& s);

} // namespace snlab
