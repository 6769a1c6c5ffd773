// Acceptance suite: one check per release criterion, each printed as a
// single PASS/FAIL line with its measured values and wall time. Exit code
// is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "snlab/config.hpp"
#include "snlab/csv_io.hpp"
#include "snlab/experiments.hpp"
#include "snlab/measure.hpp"
#include "snlab/normal_form.hpp"
#include "snlab/orbit.hpp"
#include "snlab/ulam.hpp"

using namespace snlab;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

struct Check {
    int id;
    std::string name;
    double budget_s;
    std::function<Outcome()> fn;
};

void note(Outcome& out, bool ok, const std::string& what) {
    if (!ok) out.pass = false;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += (ok ? "" : "FAILED: ") + what;
}

std::string num(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    return buf;
}

// --- 1. oracle exactness: the doubling map ---------------------------------
Outcome crit_oracle_exactness() {
    Outcome out;
    MapFamily dob = MapFamily::doubling();

    OrbitRecord rec = iterate_orbit(dob, 0.0, CirclePoint{0.37}, 1000000, 0);
    double lyap = lyapunov_exponent(rec);
    note(out, std::fabs(lyap - std::log(2.0)) < 1e-6,
         "lyapunov=" + num(lyap, 12) + " vs ln2 (tol 1e-6)");

    DensityResult d = invariant_density(build_ulam(dob, 0.0, 1024));
    double sup_dev = 0.0;
    for (double w : d.density.weights) sup_dev = std::max(sup_dev, std::fabs(w - 1.0 / 1024));
    note(out, d.converged && sup_dev < 1e-10, "ulam sup deviation=" + num(sup_dev, 3));

    EntropyEstimate e = symbolic_block_entropy(rec.points, SymbolicPartition::uniform(2), 12);
    note(out, std::fabs(e.value - std::log(2.0)) / std::log(2.0) < 0.02 && !e.undersampled,
         "binary-partition entropy=" + num(e.value, 8) + " vs ln2 (tol 2%)");
    return out;
}

// --- 2. flow oracles ---------------------------------------------------------
Outcome crit_flow_oracles() {
    Outcome out;
    NormalFormField f = NormalFormField::make(1.0, 0.0, 0.0, -0.1, 0.1);

    double worst = 0.0;
    CounterRng rng(2026, 0);
    int used = 0;
    while (used < 1000) {
        double t = rng.uniform() < 0.5 ? 0.0 : 0.05 * rng.uniform();
        double x = -0.3 + 0.6 * rng.uniform();
        double s_max;
        if (t == 0.0) {
            if (std::fabs(x) < 1e-4) continue;
            s_max = x > 0.0 ? (1.0 / x - 2.0) : 10.0;
            if (s_max <= 0.0) continue;
        } else {
            double st = std::sqrt(t);
            s_max = (std::atan(0.45 / st) - std::atan(x / st)) / st;
        }
        double s = s_max * rng.uniform();
        double exact = t == 0.0 ? x / (1.0 - x * s)
                                : std::sqrt(t) * std::tan(std::sqrt(t) * s
                                                          + std::atan(x / std::sqrt(t)));
        worst = std::max(worst, std::fabs(flow(f, t, x, s) - exact));
        ++used;
    }
    note(out, worst < 1e-8, "max |flow - closed form| = " + num(worst, 3) + " (tol 1e-8)");

    double s5 = hitting_time(f, 0.0, -0.2, -0.1);
    note(out, std::fabs(s5 - 5.0) < 1e-9, "hitting_time(0,-0.2,-0.1)=" + num(s5, 12));
    return out;
}

// --- 3. transition convergence ----------------------------------------------
Outcome crit_transition_convergence() {
    Outcome out;
    NormalFormField f = NormalFormField::make(1.0, 0.0, 0.0, -0.1, 0.1);
    double x_lo, x_hi;
    transition_domain(f, x_lo, x_hi);

    auto sup_err = [&](int k) {
        double worst = 0.0;
        for (int si = 0; si < 5; ++si) {
            double sigma = si / 4.0;
            double t = solve_t_for_sigma(f, k, sigma);
            for (int xi = 0; xi < 10; ++xi) {
                double x = x_lo + (x_hi - x_lo) * xi / 9.0;
                double tk = flow(f, t, x, static_cast<double>(k));
                worst = std::max(worst, std::fabs(tk - transition_map_limit(f, sigma, x)));
            }
        }
        return worst;
    };
    double e32 = sup_err(32);
    double e64 = sup_err(64);
    note(out, std::isfinite(e32) && std::isfinite(e64) && e64 < e32,
         "sup|T_k - T_inf|: k=32 -> " + num(e32, 4) + ", k=64 -> " + num(e64, 4));

    for (int k : {16, 32, 64}) {
        double v = transition_map_k(f, k, 0.0, f.a);
        note(out, std::fabs(v - f.b) < 1e-8, "T_" + std::to_string(k) + "(0,a)=" + num(v, 10));
    }
    return out;
}

// --- 4. basin fullness --------------------------------------------------------
Outcome crit_basin() {
    Outcome out;
    double fc = basin_fraction(MapFamily::canonical(0.2), 10000, 100000, 1e-3);
    note(out, fc >= 0.999, "canonical fraction=" + num(fc, 6));
    double fa = basin_fraction(MapFamily::arnold(), 10000, 100000, 1e-3);
    note(out, fa == 1.0, "arnold fraction=" + num(fa, 6));
    double fd = basin_fraction(MapFamily::doubling(), 10000, 100000, 1e-3);
    note(out, fd <= 0.01, "doubling fraction=" + num(fd, 6));
    return out;
}

// --- 5. distortion bound -------------------------------------------------------
Outcome crit_distortion() {
    Outcome out;
    DistortionReport rep = distortion_audit(MapFamily::canonical(0.2), 1000, 1e-3, 1);
    note(out, rep.max_observed <= rep.C0_bound,
         "max_observed=" + num(rep.max_observed, 6) + " <= C0=" + num(rep.C0_bound, 6)
             + " (sigma=" + num(rep.sigma_used, 6) + ", gamma0=" + num(rep.gamma0_estimate, 6)
             + ", worst_k1=" + std::to_string(rep.worst_k1) + ")");
    note(out, rep.gamma0_estimate < 1.0, "gamma0 < 1");
    return out;
}

// --- 6. uniform expansion -------------------------------------------------------
Outcome crit_expansion() {
    Outcome out;
    MapFamily can = MapFamily::canonical(0.2);
    struct Setting { double t; long grid; };
    int prev_N = 1000;
    for (Setting s : {Setting{0.1, 100000}, Setting{0.05, 100000},
                      Setting{0.025, 4000000}, Setting{0.0125, 200000000}}) {
        try {
            ExpansionCertificate cert = expansion_certificate(can, s.t, 25, s.grid);
            note(out, cert.e0 > 0.0,
                 "t=" + num(s.t, 4) + ": N=" + std::to_string(cert.N) + " e0=" + num(cert.e0, 4)
                     + " (min=" + num(cert.grid_min, 4) + ", margin=" + num(cert.margin, 4) + ")");
            note(out, cert.N >= prev_N || s.t >= 0.1, "N non-increasing in t");
            prev_N = cert.N;
        } catch (const CertificateFailedError&) {
            note(out, false, "certificate failed at t=" + num(s.t, 4));
        }
    }
    bool failed_at_zero = false;
    try {
        expansion_certificate(can, 0.0, 25, 100000);
    } catch (const CertificateFailedError&) {
        failed_at_zero = true;
    }
    note(out, failed_at_zero, "certificate correctly fails at t=0");
    return out;
}

// --- 7. statistical stability ---------------------------------------------------
Outcome crit_statistical(const SweepResult& res) {
    Outcome out;
    bool decreasing = true, rhs_dec = true, rhs_pos = true;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& r = res.rows[i];
        if (r.failed) note(out, false, "row " + num(r.param, 4) + " failed: " + r.error);
        if (i > 0 && !(r.w1_to_dirac < res.rows[i - 1].w1_to_dirac)) decreasing = false;
        if (i > 0 && !(r.entropy_rhs < res.rows[i - 1].entropy_rhs)) rhs_dec = false;
        if (!(r.entropy_rhs > 0.0)) rhs_pos = false;
        note(out, r.mc_vs_ulam_w1 < 5e-3,
             "ulam-vs-MC t=" + num(r.param, 4) + ": " + num(r.mc_vs_ulam_w1, 3));
        note(out, std::fabs(r.lyapunov - r.entropy_rhs) < 2e-2,
             "|lyap-rhs| t=" + num(r.param, 4) + ": "
                 + num(std::fabs(r.lyapunov - r.entropy_rhs), 3));
    }
    note(out, decreasing, "W1 strictly decreasing along the ladder");
    note(out, res.rows.back().w1_to_dirac < 0.1,
         "W1 at smallest t = " + num(res.rows.back().w1_to_dirac, 6) + " (< 0.1)");
    note(out, rhs_pos && rhs_dec, "entropy_rhs positive and decreasing");
    note(out, res.rows.back().entropy_rhs < 0.15,
         "entropy_rhs at smallest t = " + num(res.rows.back().entropy_rhs, 6) + " (< 0.15)");
    return out;
}

// --- 8. stochastic stability -----------------------------------------------------
Outcome crit_stochastic(const SweepResult& res) {
    Outcome out;
    bool decreasing = true;
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        const SweepRow& r = res.rows[i];
        if (r.failed) note(out, false, "row " + num(r.param, 4) + " failed: " + r.error);
        if (i > 0 && !(r.w1_to_dirac < res.rows[i - 1].w1_to_dirac)) decreasing = false;
        note(out, r.min_density > 0.0,
             "full support eps=" + num(r.param, 4) + ": min=" + num(r.min_density, 3));
        note(out, std::fabs(r.lyapunov - r.entropy_rhs) < 2e-2,
             "|rand-lyap - int log f0'| eps=" + num(r.param, 4) + ": "
                 + num(std::fabs(r.lyapunov - r.entropy_rhs), 3));
    }
    note(out, decreasing, "W1 strictly decreasing along the ladder");
    note(out, res.rows.back().w1_to_dirac < 0.1,
         "W1 at smallest eps = " + num(res.rows.back().w1_to_dirac, 6) + " (< 0.1)");
    return out;
}

// --- 9. homeomorphism stability ---------------------------------------------------
Outcome crit_homeo(const SweepResult& det, const SweepResult& rnd) {
    Outcome out;
    auto ladder = [&](const SweepResult& res, const char* tag) {
        bool dec = true;
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            if (res.rows[i].failed)
                note(out, false, std::string(tag) + " row " + num(res.rows[i].param, 4)
                                     + " failed: " + res.rows[i].error);
            if (i > 0 && !(res.rows[i].w1_to_dirac < res.rows[i - 1].w1_to_dirac)) dec = false;
        }
        note(out, dec, std::string(tag) + " W1 decreasing");
        note(out, res.rows.back().w1_to_dirac < 0.1,
             std::string(tag) + " W1 at smallest = " + num(res.rows.back().w1_to_dirac, 6));
    };
    ladder(det, "deterministic");
    ladder(rnd, "random");

    // t = 0: unique ergodicity pins the Birkhoff mass at the saddle-node.
    MapFamily arn = MapFamily::arnold();
    for (int k = 0; k < 10; ++k) {
        double x0 = rng_uniform(4242, 5, static_cast<std::uint64_t>(k));
        long inside = 0;
        const long n = 100000;
        stream_orbit(arn, 0.0, x0, n, 10000, [&](double x, double, double) {
            if (circle_dist(CirclePoint{x}, CirclePoint{0.0}) <= 1e-3) ++inside;
        });
        double mass = static_cast<double>(inside) / n;
        note(out, mass > 0.999, "t=0 start " + std::to_string(k) + ": mass=" + num(mass, 6));
    }
    return out;
}

// --- 10. reproducibility -----------------------------------------------------------
Outcome crit_reproducibility() {
    Outcome out;
    namespace fs = std::filesystem;
    fs::path root = fs::temp_directory_path() / "snlab_acceptance_repro";
    fs::remove_all(root);

    const std::string small_sweep =
        "[sweep]\nvalues=0.1,0.05\nbins=256\nmc_n=200000\nmc_burn=1000\nquad_m=8\n"
        "entropy_max_block=5\nhomeo_power_iter_max=500\n";
    struct Job { const char* tag; std::string cfg; const char* artifact; };
    std::vector<Job> jobs = {
        {"verify", "command=verify\nseed=3\n", "verify.csv"},
        {"orbit", "command=orbit\nseed=3\n[orbit]\nt=0.05\nn=5000\neps=0.03\n", "orbit.csv"},
        {"ulam", "command=ulam\nseed=3\n[ulam]\nt=0.05\nbins=256\neps=0.02\nquad_m=8\n",
         "ulam.csv"},
        {"transition",
         "command=transition\nseed=3\n[transition]\nk_values=8,16\nsigma_n=3\nx_n=4\n",
         "transition.csv"},
        {"basin", "command=basin\nseed=3\n[basin]\nn_grid=500\nn_iter=20000\n", "basin.csv"},
        {"distortion", "command=distortion\nseed=3\n[distortion]\nn_intervals=100\n",
         "distortion.csv"},
        {"stat-sweep", "command=stat-sweep\nseed=3\n" + small_sweep, "sweep.csv"},
        {"stoch-sweep", "command=stoch-sweep\nseed=3\n" + small_sweep, "sweep.csv"},
        {"homeo-sweep",
         "command=homeo-sweep\nseed=3\n[family]\nkind=arnold\n" + small_sweep, "sweep.csv"},
    };
    for (const Job& job : jobs) {
        std::string csv_a, csv_b;
        for (int pass = 0; pass < 2; ++pass) {
            fs::path dir = root / (std::string(job.tag) + (pass == 0 ? "_a" : "_b"));
            RunConfig cfg = parse_config("out=" + dir.string() + "\n" + job.cfg);
            int rc = run(cfg);
            if (rc != 0) {
                note(out, false, std::string(job.tag) + " exited with " + std::to_string(rc));
                break;
            }
            std::string bytes = read_file((dir / job.artifact).string());
            (pass == 0 ? csv_a : csv_b) = bytes;
        }
        note(out, !csv_a.empty() && csv_a == csv_b,
             std::string(job.tag) + " byte-identical across reruns");
    }
    fs::remove_all(root);
    return out;
}

} // namespace

int main() {
    MapFamily can = MapFamily::canonical(0.2);
    MapFamily arn = MapFamily::arnold();
    const std::vector<double> ladder{0.1, 0.05, 0.025, 0.0125, 0.00625};
    SweepSettings s;  // defaults: bins=1024, mc_n=1e7, quad_m=16, seed=1

    SweepResult stat_res, stoch_res, homeo_det, homeo_rnd;

    std::vector<Check> checks = {
        {1, "oracle exactness (doubling map)", 10.0, crit_oracle_exactness},
        {2, "flow oracles (closed forms)", 10.0, crit_flow_oracles},
        {3, "transition convergence", 120.0, crit_transition_convergence},
        {4, "basin fullness", 300.0, crit_basin},
        {5, "distortion bound", 120.0, crit_distortion},
        {6, "uniform expansion certificates", 120.0, crit_expansion},
        {7, "statistical stability", 900.0,
         [&] {
             stat_res = statistical_sweep(can, ladder, s);
             return crit_statistical(stat_res);
         }},
        {8, "stochastic stability", 1200.0,
         [&] {
             stoch_res = stochastic_sweep(can, ladder, s);
             return crit_stochastic(stoch_res);
         }},
        {9, "homeomorphism stability", 600.0,
         [&] {
             homeo_det = homeo_sweep(arn, ladder, HomeoMode::Deterministic, s);
             homeo_rnd = homeo_sweep(arn, ladder, HomeoMode::Random, s);
             return crit_homeo(homeo_det, homeo_rnd);
         }},
        {10, "reproducibility", 600.0, crit_reproducibility},
    };

    int failures = 0;
    for (const Check& c : checks) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.fn();
        } catch (const std::exception& e) {
            out.pass = false;
            out.detail = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs >= c.budget_s) {
            out.pass = false;
            out.detail += "; runtime budget exceeded";
        }
        std::printf("[%s] %2d. %s (%.1fs < %.0fs) -- %s\n", out.pass ? "PASS" : "FAIL", c.id,
                    c.name.c_str(), secs, c.budget_s, out.detail.c_str());
        std::fflush(stdout);
        if (!out.pass) ++failures;
    }
    std::printf("acceptance: %d/%zu criteria passed\n", static_cast<int>(checks.size()) - failures,
                checks.size());
    return failures;
}
