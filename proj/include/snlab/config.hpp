#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "snlab/experiments.hpp"
#include "snlab/family.hpp"

// Strict line-oriented key=value configuration with [section] headers.
// Unknown keys, malformed values and out-of-range values are rejected with
// the offending line number; the effective config (defaults filled in) is
// echoed next to the outputs and parses back to the same configuration.

namespace snlab {

enum class Command {
    Orbit, Ulam, Transition, Basin, Distortion, StatSweep, StochSweep, HomeoSweep, Verify
};

std::string command_name(Command c);
Command command_from_name(const std::string& s, int line);

struct RunConfig {
    Command command = Command::Verify;
    std::uint64_t seed = 1;
    std::string out_dir = "out";

    // [family]
    std::string family_kind = "canonical";
    double family_c = 0.2;
    double family_a = 0.8;
    double family_t0 = 0.2;

    // [orbit]
    double orbit_t = 0.05;
    double orbit_x0 = 0.3;
    long orbit_n = 1000;
    long orbit_burn = 0;
    double orbit_eps = 0.0;  // > 0 selects the random composition

    // [ulam]
    double ulam_t = 0.05;
    int ulam_bins = 1024;
    double ulam_eps = 0.0;  // > 0 selects the noise-averaged operator
    int ulam_quad_m = 16;
    double ulam_tol = 1e-12;
    long ulam_iter_max = 100000;

    // [transition]
    double tr_alpha = 1.0, tr_beta = 0.0, tr_gamma = 0.0;
    double tr_a = -0.1, tr_b = 0.1;
    std::vector<long> tr_k_values{16, 32, 64};
    int tr_sigma_n = 11;
    int tr_x_n = 11;

    // [basin]
    long basin_n_grid = 10000;
    long basin_n_iter = 100000;
    double basin_delta = 1e-3;

    // [distortion]
    int dist_n_intervals = 1000;
    double dist_interval_len = 1e-3;

    // [sweep]
    std::vector<double> sweep_values{0.1, 0.05, 0.025, 0.0125, 0.00625};
    int sweep_bins = 1024;
    long sweep_mc_n = 10000000;
    long sweep_mc_burn = 1000;
    int sweep_quad_m = 16;
    int sweep_entropy_atoms = 7;
    int sweep_entropy_max_block = 10;
    long sweep_power_iter_max = 100000;
    long sweep_homeo_power_iter_max = 5000;
    std::string sweep_mode = "deterministic";  // homeo-sweep: deterministic | random

    MapFamily family() const;
    SweepSettings sweep_settings() const;
    std::string echo() const;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig parse_config_file(const std::string& path);

/// Dispatch a parsed config: writes CSV artifacts, the effective config and
/// a manifest under out_dir. Returns 0 on success, 1 on hard-invariant
/// failure (the caller maps usage errors to 2).
int run(const RunConfig& cfg);

} // namespace snlab
