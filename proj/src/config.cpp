#include "snlab/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "snlab/csv_io.hpp"
#include "snlab/errors.hpp"

namespace snlab {

std::string command_name(Command c) {
    switch (c) {
        case Command::Orbit: return "orbit";
        case Command::Ulam: return "ulam";
        case Command::Transition: return "transition";
        case Command::Basin: return "basin";
        case Command::Distortion: return "distortion";
        case Command::StatSweep: return "stat-sweep";
        case Command::StochSweep: return "stoch-sweep";
        case Command::HomeoSweep: return "homeo-sweep";
        case Command::Verify: return "verify";
    }
    return "?";
}

Command command_from_name(const std::string& s, int line) {
    for (Command c : {Command::Orbit, Command::Ulam, Command::Transition, Command::Basin,
                      Command::Distortion, Command::StatSweep, Command::StochSweep,
                      Command::HomeoSweep, Command::Verify})
        if (command_name(c) == s) return c;
    throw ConfigError(line, "unknown command '" + s + "'");
}

MapFamily RunConfig::family() const {
    if (family_kind == "canonical") return MapFamily::canonical(family_c, family_t0);
    if (family_kind == "arnold") return MapFamily::arnold(family_a, family_t0);
    if (family_kind == "doubling") return MapFamily::doubling(family_t0);
    throw DomainError("unknown family kind '" + family_kind + "'");
}

SweepSettings RunConfig::sweep_settings() const {
    SweepSettings s;
    s.bins = sweep_bins;
    s.mc_n = sweep_mc_n;
    s.mc_burn = sweep_mc_burn;
    s.quad_m = sweep_quad_m;
    s.ulam_tol = ulam_tol;
    s.power_iter_max = sweep_power_iter_max;
    s.homeo_power_iter_max = sweep_homeo_power_iter_max;
    s.entropy_atoms = sweep_entropy_atoms;
    s.entropy_max_block = sweep_entropy_max_block;
    s.seed = seed;
    return s;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError(line, "malformed numeric value '" + v + "'");
    }
}

long parse_long(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError(line, "malformed integer value '" + v + "'");
    }
}

std::uint64_t parse_u64(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        unsigned long long d = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return d;
    } catch (...) {
        throw ConfigError(line, "malformed unsigned value '" + v + "'");
    }
}

std::vector<double> parse_double_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

std::vector<long> parse_long_list(const std::string& v, int line) {
    std::vector<long> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_long(trim(item), line));
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

void check(bool ok, int line, const std::string& msg) {
    if (!ok) throw ConfigError(line, msg);
}

} // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::stringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    bool saw_command = false;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            check(s.back() == ']', line, "malformed section header");
            section = trim(s.substr(1, s.size() - 2));
            check(section == "family" || section == "orbit" || section == "ulam" ||
                      section == "transition" || section == "basin" || section == "distortion" ||
                      section == "sweep",
                  line, "unknown section '" + section + "'");
            continue;
        }
        std::size_t eq = s.find('=');
        check(eq != std::string::npos, line, "expected key=value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        check(!key.empty(), line, "empty key");
        std::string full = section.empty() ? key : section + "." + key;

        if (full == "command") {
            cfg.command = command_from_name(val, line);
            saw_command = true;
        } else if (full == "seed") {
            cfg.seed = parse_u64(val, line);
        } else if (full == "out") {
            check(!val.empty(), line, "empty output path");
            cfg.out_dir = val;
        } else if (full == "family.kind") {
            check(val == "canonical" || val == "arnold" || val == "doubling", line,
                  "unknown family kind '" + val + "'");
            cfg.family_kind = val;
        } else if (full == "family.c") {
            cfg.family_c = parse_double(val, line);
            check(cfg.family_c > 0.0, line, "family.c must be positive");
        } else if (full == "family.a") {
            cfg.family_a = parse_double(val, line);
            check(cfg.family_a > 0.0 && cfg.family_a < 1.0, line, "family.a must lie in (0,1)");
        } else if (full == "family.t0") {
            cfg.family_t0 = parse_double(val, line);
            check(cfg.family_t0 > 0.0, line, "family.t0 must be positive");
        } else if (full == "orbit.t") {
            cfg.orbit_t = parse_double(val, line);
            check(cfg.orbit_t >= 0.0, line, "orbit.t must be >= 0");
        } else if (full == "orbit.x0") {
            cfg.orbit_x0 = parse_double(val, line);
        } else if (full == "orbit.n") {
            cfg.orbit_n = parse_long(val, line);
            check(cfg.orbit_n >= 1, line, "orbit.n must be >= 1");
        } else if (full == "orbit.burn") {
            cfg.orbit_burn = parse_long(val, line);
            check(cfg.orbit_burn >= 0, line, "orbit.burn must be >= 0");
        } else if (full == "orbit.eps") {
            cfg.orbit_eps = parse_double(val, line);
            check(cfg.orbit_eps >= 0.0, line, "orbit.eps must be >= 0");
        } else if (full == "ulam.t") {
            cfg.ulam_t = parse_double(val, line);
            check(cfg.ulam_t >= 0.0, line, "ulam.t must be >= 0");
        } else if (full == "ulam.bins") {
            cfg.ulam_bins = static_cast<int>(parse_long(val, line));
            check(cfg.ulam_bins >= 2 && cfg.ulam_bins <= 65536, line, "ulam.bins out of range");
        } else if (full == "ulam.eps") {
            cfg.ulam_eps = parse_double(val, line);
            check(cfg.ulam_eps >= 0.0, line, "ulam.eps must be >= 0");
        } else if (full == "ulam.quad_m") {
            cfg.ulam_quad_m = static_cast<int>(parse_long(val, line));
            check(cfg.ulam_quad_m >= 2, line, "ulam.quad_m must be >= 2");
        } else if (full == "ulam.tol") {
            cfg.ulam_tol = parse_double(val, line);
            check(cfg.ulam_tol > 0.0, line, "ulam.tol must be positive");
        } else if (full == "ulam.iter_max") {
            cfg.ulam_iter_max = parse_long(val, line);
            check(cfg.ulam_iter_max >= 1, line, "ulam.iter_max must be >= 1");
        } else if (full == "transition.alpha") {
            cfg.tr_alpha = parse_double(val, line);
            check(cfg.tr_alpha > 0.0, line, "transition.alpha must be positive");
        } else if (full == "transition.beta") {
            cfg.tr_beta = parse_double(val, line);
        } else if (full == "transition.gamma") {
            cfg.tr_gamma = parse_double(val, line);
        } else if (full == "transition.a") {
            cfg.tr_a = parse_double(val, line);
            check(cfg.tr_a < 0.0, line, "transition.a must be negative");
        } else if (full == "transition.b") {
            cfg.tr_b = parse_double(val, line);
            check(cfg.tr_b > 0.0, line, "transition.b must be positive");
        } else if (full == "transition.k_values") {
            cfg.tr_k_values = parse_long_list(val, line);
            for (long k : cfg.tr_k_values) check(k >= 1, line, "transition.k_values must be >= 1");
        } else if (full == "transition.sigma_n") {
            cfg.tr_sigma_n = static_cast<int>(parse_long(val, line));
            check(cfg.tr_sigma_n >= 2, line, "transition.sigma_n must be >= 2");
        } else if (full == "transition.x_n") {
            cfg.tr_x_n = static_cast<int>(parse_long(val, line));
            check(cfg.tr_x_n >= 2, line, "transition.x_n must be >= 2");
        } else if (full == "basin.n_grid") {
            cfg.basin_n_grid = parse_long(val, line);
            check(cfg.basin_n_grid >= 1, line, "basin.n_grid must be >= 1");
        } else if (full == "basin.n_iter") {
            cfg.basin_n_iter = parse_long(val, line);
            check(cfg.basin_n_iter >= 1, line, "basin.n_iter must be >= 1");
        } else if (full == "basin.delta") {
            cfg.basin_delta = parse_double(val, line);
            check(cfg.basin_delta > 0.0, line, "basin.delta must be positive");
        } else if (full == "distortion.n_intervals") {
            cfg.dist_n_intervals = static_cast<int>(parse_long(val, line));
            check(cfg.dist_n_intervals >= 1, line, "distortion.n_intervals must be >= 1");
        } else if (full == "distortion.interval_len") {
            cfg.dist_interval_len = parse_double(val, line);
            check(cfg.dist_interval_len > 0.0 && cfg.dist_interval_len <= 0.25, line,
                  "distortion.interval_len out of range");
        } else if (full == "sweep.values") {
            cfg.sweep_values = parse_double_list(val, line);
        } else if (full == "sweep.bins") {
            cfg.sweep_bins = static_cast<int>(parse_long(val, line));
            check(cfg.sweep_bins >= 2 && cfg.sweep_bins <= 65536, line, "sweep.bins out of range");
        } else if (full == "sweep.mc_n") {
            cfg.sweep_mc_n = parse_long(val, line);
            check(cfg.sweep_mc_n >= 1, line, "sweep.mc_n must be >= 1");
        } else if (full == "sweep.mc_burn") {
            cfg.sweep_mc_burn = parse_long(val, line);
            check(cfg.sweep_mc_burn >= 0, line, "sweep.mc_burn must be >= 0");
        } else if (full == "sweep.quad_m") {
            cfg.sweep_quad_m = static_cast<int>(parse_long(val, line));
            check(cfg.sweep_quad_m >= 2, line, "sweep.quad_m must be >= 2");
        } else if (full == "sweep.entropy_atoms") {
            cfg.sweep_entropy_atoms = static_cast<int>(parse_long(val, line));
            check(cfg.sweep_entropy_atoms >= 2, line, "sweep.entropy_atoms must be >= 2");
        } else if (full == "sweep.entropy_max_block") {
            cfg.sweep_entropy_max_block = static_cast<int>(parse_long(val, line));
            check(cfg.sweep_entropy_max_block >= 1, line, "sweep.entropy_max_block must be >= 1");
        } else if (full == "sweep.power_iter_max") {
            cfg.sweep_power_iter_max = parse_long(val, line);
            check(cfg.sweep_power_iter_max >= 1, line, "sweep.power_iter_max must be >= 1");
        } else if (full == "sweep.homeo_power_iter_max") {
            cfg.sweep_homeo_power_iter_max = parse_long(val, line);
            check(cfg.sweep_homeo_power_iter_max >= 1, line,
                  "sweep.homeo_power_iter_max must be >= 1");
        } else if (full == "sweep.mode") {
            check(val == "deterministic" || val == "random", line,
                  "sweep.mode must be deterministic or random");
            cfg.sweep_mode = val;
        } else {
            throw ConfigError(line, "unknown key '" + full + "'");
        }
    }
    if (!saw_command) throw ConfigError(line, "missing required key 'command'");
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string RunConfig::echo() const {
    std::ostringstream o;
    o << "command=" << command_name(command) << "\n";
    o << "seed=" << seed << "\n";
    o << "out=" << out_dir << "\n";
    o << "[family]\n";
    o << "kind=" << family_kind << "\n";
    o << "c=" << format_g17(family_c) << "\n";
    o << "a=" << format_g17(family_a) << "\n";
    o << "t0=" << format_g17(family_t0) << "\n";
    o << "[orbit]\n";
    o << "t=" << format_g17(orbit_t) << "\n";
    o << "x0=" << format_g17(orbit_x0) << "\n";
    o << "n=" << orbit_n << "\n";
    o << "burn=" << orbit_burn << "\n";
    o << "eps=" << format_g17(orbit_eps) << "\n";
    o << "[ulam]\n";
    o << "t=" << format_g17(ulam_t) << "\n";
    o << "bins=" << ulam_bins << "\n";
    o << "eps=" << format_g17(ulam_eps) << "\n";
    o << "quad_m=" << ulam_quad_m << "\n";
    o << "tol=" << format_g17(ulam_tol) << "\n";
    o << "iter_max=" << ulam_iter_max << "\n";
    o << "[transition]\n";
    o << "alpha=" << format_g17(tr_alpha) << "\n";
    o << "beta=" << format_g17(tr_beta) << "\n";
    o << "gamma=" << format_g17(tr_gamma) << "\n";
    o << "a=" << format_g17(tr_a) << "\n";
    o << "b=" << format_g17(tr_b) << "\n";
    o << "k_values=";
    for (std::size_t i = 0; i < tr_k_values.size(); ++i)
        o << (i ? "," : "") << tr_k_values[i];
    o << "\n";
    o << "sigma_n=" << tr_sigma_n << "\n";
    o << "x_n=" << tr_x_n << "\n";
    o << "[basin]\n";
    o << "n_grid=" << basin_n_grid << "\n";
    o << "n_iter=" << basin_n_iter << "\n";
    o << "delta=" << format_g17(basin_delta) << "\n";
    o << "[distortion]\n";
    o << "n_intervals=" << dist_n_intervals << "\n";
    o << "interval_len=" << format_g17(dist_interval_len) << "\n";
    o << "[sweep]\n";
    o << "values=";
    for (std::size_t i = 0; i < sweep_values.size(); ++i)
        o << (i ? "," : "") << format_g17(sweep_values[i]);
    o << "\n";
    o << "bins=" << sweep_bins << "\n";
    o << "mc_n=" << sweep_mc_n << "\n";
    o << "mc_burn=" << sweep_mc_burn << "\n";
    o << "quad_m=" << sweep_quad_m << "\n";
    o << "entropy_atoms=" << sweep_entropy_atoms << "\n";
    o << "entropy_max_block=" << sweep_entropy_max_block << "\n";
    o << "power_iter_max=" << sweep_power_iter_max << "\n";
    o << "homeo_power_iter_max=" << sweep_homeo_power_iter_max << "\n";
    o << "mode=" << sweep_mode << "\n";
    return o.str();
}

} // namespace snlab
