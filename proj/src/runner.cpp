#include <chrono>
#include <filesystem>
#include <iostream>

#include "snlab/config.hpp"
#include "snlab/csv_io.hpp"
#include "snlab/normal_form.hpp"
#include "snlab/parallel.hpp"
#include "snlab/version.hpp"

namespace snlab {

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.out_dir) / name).string();
}

int run_verify(const RunConfig& cfg) {
    HypothesisReport rep = verify_hypotheses(cfg.family());
    CsvFile csv({"field", "value"});
    csv.add_row({"saddle_node_ok", rep.saddle_node_ok ? "1" : "0"});
    csv.add_row({"h1_ok", rep.h1_ok ? "1" : "0"});
    csv.add_row({"h1_applicable", rep.h1_applicable ? "1" : "0"});
    csv.add_row({"has_source", rep.has_source ? "1" : "0"});
    csv.add_row({"source_s", format_g17(rep.source_s.value)});
    csv.add_row({"basin_start", format_g17(rep.immediate_basin.start.value)});
    csv.add_row({"basin_length", format_g17(rep.immediate_basin.length)});
    csv.add_row({"min_deriv_outside", format_g17(rep.min_deriv_outside)});
    csv.add_row({"injectivity_radius", format_g17(rep.injectivity_radius)});
    atomic_write(out_path(cfg, "verify.csv"), csv.serialize());
    return 0;
}

int run_orbit(const RunConfig& cfg) {
    MapFamily fam = cfg.family();
    CsvFile csv({"i", "x", "t_i", "log_deriv"});
    long i = 0;
    auto eat = [&](double x, double ld, double t) {
        csv.add_row({std::to_string(i++), format_g17(x), format_g17(t), format_g17(ld)});
    };
    if (cfg.orbit_eps > 0.0) {
        NoiseKernel kernel = NoiseKernel::uniform(cfg.orbit_eps, fam.t0);
        stream_random_orbit(fam, kernel, cfg.orbit_x0, cfg.orbit_n, cfg.orbit_burn,
                            cfg.seed, eat);
    } else {
        stream_orbit(fam, cfg.orbit_t, cfg.orbit_x0, cfg.orbit_n, cfg.orbit_burn, eat);
    }
    atomic_write(out_path(cfg, "orbit.csv"), csv.serialize());
    return 0;
}

int run_ulam(const RunConfig& cfg) {
    MapFamily fam = cfg.family();
    TransferMatrix P = cfg.ulam_eps > 0.0
        ? averaged_ulam(fam, NoiseKernel::uniform(cfg.ulam_eps, fam.t0), cfg.ulam_bins,
                        cfg.ulam_quad_m)
        : build_ulam(fam, cfg.ulam_t, cfg.ulam_bins);
    DensityResult d = invariant_density(P, cfg.ulam_tol, cfg.ulam_iter_max);
    CsvFile csv({"bin_center", "weight"});
    for (int i = 0; i < d.density.bins; ++i)
        csv.add_row({format_g17(d.density.center(i)), format_g17(d.density.weights[i])});
    atomic_write(out_path(cfg, "ulam.csv"), csv.serialize());
    std::cout << "ulam: iterations=" << d.iterations << " residual=" << format_g17(d.residual)
              << " converged=" << (d.converged ? 1 : 0) << "\n";
    return 0;
}

int run_transition(const RunConfig& cfg) {
    NormalFormField field =
        NormalFormField::make(cfg.tr_alpha, cfg.tr_beta, cfg.tr_gamma, cfg.tr_a, cfg.tr_b);
    double x_lo, x_hi;
    transition_domain(field, x_lo, x_hi);
    CsvFile csv({"k", "sigma", "x", "T_k", "T_inf", "abs_err"});
    for (long k : cfg.tr_k_values) {
        for (int si = 0; si < cfg.tr_sigma_n; ++si) {
            double sigma = static_cast<double>(si) / (cfg.tr_sigma_n - 1);
            double t = solve_t_for_sigma(field, static_cast<int>(k), sigma);
            for (int xi = 0; xi < cfg.tr_x_n; ++xi) {
                double x = x_lo + (x_hi - x_lo) * xi / (cfg.tr_x_n - 1);
                double tk = flow(field, t, x, static_cast<double>(k));
                double ti = transition_map_limit(field, sigma, x);
                csv.add_row({std::to_string(k), format_g17(sigma), format_g17(x),
                             format_g17(tk), format_g17(ti), format_g17(std::fabs(tk - ti))});
            }
        }
    }
    atomic_write(out_path(cfg, "transition.csv"), csv.serialize());
    return 0;
}

int run_basin(const RunConfig& cfg) {
    double frac = basin_fraction(cfg.family(), cfg.basin_n_grid, cfg.basin_n_iter,
                                 cfg.basin_delta);
    CsvFile csv({"n_grid", "n_iter", "delta", "fraction"});
    csv.add_row({std::to_string(cfg.basin_n_grid), std::to_string(cfg.basin_n_iter),
                 format_g17(cfg.basin_delta), format_g17(frac)});
    atomic_write(out_path(cfg, "basin.csv"), csv.serialize());
    return 0;
}

int run_distortion(const RunConfig& cfg) {
    DistortionReport rep = distortion_audit(cfg.family(), cfg.dist_n_intervals,
                                            cfg.dist_interval_len, cfg.seed);
    CsvFile csv({"C0_bound", "max_observed", "sigma_used", "gamma0_estimate", "eta0",
                 "worst_k1"});
    csv.add_row({format_g17(rep.C0_bound), format_g17(rep.max_observed),
                 format_g17(rep.sigma_used), format_g17(rep.gamma0_estimate),
                 format_g17(rep.eta0), std::to_string(rep.worst_k1)});
    atomic_write(out_path(cfg, "distortion.csv"), csv.serialize());
    if (rep.max_observed > rep.C0_bound) {
        std::cerr << "distortion: hard invariant violated (max_observed > C0_bound)\n";
        return 1;
    }
    return 0;
}

void write_sweep_csv(const RunConfig& cfg, const SweepResult& res) {
    CsvFile csv({"param", "w1_to_dirac", "lyapunov", "entropy_rhs", "entropy_symbolic",
                 "mc_vs_ulam_w1", "min_density", "ulam_converged", "status"});
    for (const SweepRow& r : res.rows)
        csv.add_row({format_g17(r.param), format_g17(r.w1_to_dirac), format_g17(r.lyapunov),
                     format_g17(r.entropy_rhs), format_g17(r.entropy_symbolic),
                     format_g17(r.mc_vs_ulam_w1), format_g17(r.min_density),
                     r.ulam_converged ? "1" : "0", r.failed ? "failed" : "ok"});
    atomic_write(out_path(cfg, "sweep.csv"), csv.serialize());
}

int run_sweep(const RunConfig& cfg) {
    MapFamily fam = cfg.family();
    SweepSettings s = cfg.sweep_settings();
    SweepResult res;
    if (cfg.command == Command::StatSweep) {
        res = statistical_sweep(fam, cfg.sweep_values, s);
    } else if (cfg.command == Command::StochSweep) {
        res = stochastic_sweep(fam, cfg.sweep_values, s);
    } else {
        HomeoMode mode = cfg.sweep_mode == "random" ? HomeoMode::Random
                                                    : HomeoMode::Deterministic;
        res = homeo_sweep(fam, cfg.sweep_values, mode, s);
    }
    write_sweep_csv(cfg, res);
    return 0;
}

} // namespace

int run(const RunConfig& cfg) {
    auto t_start = std::chrono::steady_clock::now();
    std::filesystem::create_directories(cfg.out_dir);
    atomic_write(out_path(cfg, "effective.cfg"), cfg.echo());

    int rc = 0;
    switch (cfg.command) {
        case Command::Verify: rc = run_verify(cfg); break;
        case Command::Orbit: rc = run_orbit(cfg); break;
        case Command::Ulam: rc = run_ulam(cfg); break;
        case Command::Transition: rc = run_transition(cfg); break;
        case Command::Basin: rc = run_basin(cfg); break;
        case Command::Distortion: rc = run_distortion(cfg); break;
        case Command::StatSweep:
        case Command::StochSweep:
        case Command::HomeoSweep: rc = run_sweep(cfg); break;
    }

    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    std::ostringstream man;
    man << "command=" << command_name(cfg.command) << "\n"
        << "seed=" << cfg.seed << "\n"
        << "version=" << kVersion << "\n"
        << "threads=" << max_threads() << "\n"
        << "exit=" << rc << "\n"
        << "wall_time_s=" << format_g17(wall) << "\n";
    atomic_write(out_path(cfg, "manifest.txt"), man.str());
    return rc;
}

} // namespace snlab
