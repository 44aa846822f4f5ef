#include "nfem/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "nfem/constants.hpp"
#include "nfem/errors.hpp"

namespace nfem {

double ScenarioConfig::wavelength() const { return kSpeedOfLight / carrier_hz; }
double ScenarioConfig::wavenumber() const { return 2.0 * kPi / wavelength(); }
double ScenarioConfig::resolved_r_step() const {
    return r_step > 0.0 ? r_step : wavelength() / 8.0;
}

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

struct Field {
    std::function<std::string(const ScenarioConfig&)> get;
    std::function<void(ScenarioConfig&, const std::string&)> set;
};

double parse_double(const std::string& s) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw ConfigError("bad numeric value: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad numeric value: " + s);
    }
}

std::uint64_t parse_u64(const std::string& s) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(s, &pos);
        if (pos != s.size()) throw ConfigError("bad integer value: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad integer value: " + s);
    }
}

int parse_int(const std::string& s) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw ConfigError("bad integer value: " + s);
        return v;
    } catch (const std::logic_error&) {
        throw ConfigError("bad integer value: " + s);
    }
}

// ordered key table; serialization emits keys in this order
const std::vector<std::pair<std::string, Field>>& fields() {
    auto str = [](std::string ScenarioConfig::* m) {
        return Field{[m](const ScenarioConfig& c) { return c.*m; },
                     [m](ScenarioConfig& c, const std::string& v) { c.*m = v; }};
    };
    auto dbl = [](double ScenarioConfig::* m) {
        return Field{[m](const ScenarioConfig& c) { return csv_num(c.*m); },
                     [m](ScenarioConfig& c, const std::string& v) { c.*m = parse_double(v); }};
    };
    auto i32 = [](int ScenarioConfig::* m) {
        return Field{[m](const ScenarioConfig& c) { return std::to_string(c.*m); },
                     [m](ScenarioConfig& c, const std::string& v) { c.*m = parse_int(v); }};
    };
    auto u64 = [](std::uint64_t ScenarioConfig::* m) {
        return Field{[m](const ScenarioConfig& c) { return std::to_string(c.*m); },
                     [m](ScenarioConfig& c, const std::string& v) { c.*m = parse_u64(v); }};
    };
    static const std::vector<std::pair<std::string, Field>> table = {
        {"target", str(&ScenarioConfig::target)},
        {"plate_dy", dbl(&ScenarioConfig::plate_dy)},
        {"plate_dz", dbl(&ScenarioConfig::plate_dz)},
        {"radius", dbl(&ScenarioConfig::radius)},
        {"cyl_length", dbl(&ScenarioConfig::cyl_length)},
        {"layout", str(&ScenarioConfig::layout)},
        {"n_antennas", i32(&ScenarioConfig::n_antennas)},
        {"n_y", i32(&ScenarioConfig::n_y)},
        {"n_z", i32(&ScenarioConfig::n_z)},
        {"spacing", dbl(&ScenarioConfig::spacing)},
        {"standoff", dbl(&ScenarioConfig::standoff)},
        {"sub_count", i32(&ScenarioConfig::sub_count)},
        {"sub_spacing", dbl(&ScenarioConfig::sub_spacing)},
        {"carrier_hz", dbl(&ScenarioConfig::carrier_hz)},
        {"bandwidth_hz", dbl(&ScenarioConfig::bandwidth_hz)},
        {"l2_i0", dbl(&ScenarioConfig::l2_i0)},
        {"pattern", str(&ScenarioConfig::pattern)},
        {"oversample", dbl(&ScenarioConfig::oversample)},
        {"noise_variance", dbl(&ScenarioConfig::noise_variance)},
        {"seed", u64(&ScenarioConfig::seed)},
        {"xi_re", dbl(&ScenarioConfig::xi_re)},
        {"xi_im", dbl(&ScenarioConfig::xi_im)},
        {"r_min", dbl(&ScenarioConfig::r_min)},
        {"r_max", dbl(&ScenarioConfig::r_max)},
        {"r_step", dbl(&ScenarioConfig::r_step)},
        {"angle_min_deg", dbl(&ScenarioConfig::angle_min_deg)},
        {"angle_max_deg", dbl(&ScenarioConfig::angle_max_deg)},
        {"angle_step_deg", dbl(&ScenarioConfig::angle_step_deg)},
        {"oracle_samples_per_wl", dbl(&ScenarioConfig::oracle_samples_per_wl)},
        {"oracle_budget", u64(&ScenarioConfig::oracle_budget)},
        {"oracle_lit_only", i32(&ScenarioConfig::oracle_lit_only)},
        {"grid_n", i32(&ScenarioConfig::grid_n)},
        {"out_dir", str(&ScenarioConfig::out_dir)},
    };
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

void set_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& [name, field] : fields())
        if (name == key) {
            field.set(cfg, value);
            return;
        }
    throw ConfigError("unknown config key: " + key);
}

void validate(const ScenarioConfig& cfg) {
    if (cfg.target != "plate" && cfg.target != "sphere" && cfg.target != "cylinder")
        throw ConfigError("target must be plate, sphere or cylinder");
    if (cfg.layout != "linear" && cfg.layout != "planar" && cfg.layout != "distributed")
        throw ConfigError("layout must be linear, planar or distributed");
    if (cfg.pattern != "isotropic" && cfg.pattern != "cosine")
        throw ConfigError("pattern must be isotropic or cosine");
    if (cfg.carrier_hz <= 0.0 || cfg.bandwidth_hz <= 0.0)
        throw ConfigError("carrier and bandwidth must be positive");
    if (cfg.l2_i0 <= 0.0) throw ConfigError("l2_i0 must be positive");
    if (cfg.standoff <= 0.0) throw ConfigError("standoff must be positive");
    if (cfg.noise_variance < 0.0) throw ConfigError("noise variance must be >= 0");
}

} // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + " is not key = value");
        set_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    validate(cfg);
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

void apply_override(ScenarioConfig& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override must be key=value: " + assignment);
    set_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
    validate(cfg);
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::ostringstream out;
    for (const auto& [name, field] : fields()) out << name << " = " << field.get(cfg) << "\n";
    return out.str();
}

TargetSurface make_surface(const ScenarioConfig& cfg) {
    if (cfg.target == "plate") return TargetSurface::plate(cfg.plate_dy, cfg.plate_dz);
    if (cfg.target == "sphere") return TargetSurface::sphere(cfg.radius);
    return TargetSurface::cylinder(cfg.radius, cfg.cyl_length);
}

AntennaLayout make_layout(const ScenarioConfig& cfg) {
    if (cfg.layout == "linear")
        return build_layout(LinearArray{cfg.n_antennas, cfg.spacing, cfg.standoff});
    if (cfg.layout == "planar")
        return build_layout(PlanarArray{cfg.n_y, cfg.n_z, cfg.spacing, cfg.standoff});
    return build_layout(DistributedArray{cfg.n_antennas, cfg.spacing, cfg.sub_count,
                                         cfg.sub_spacing, cfg.standoff});
}

EmParams make_em(const ScenarioConfig& cfg) {
    return {cfg.wavenumber(), cfg.l2_i0,
            cfg.pattern == "cosine" ? PatternKind::Cosine : PatternKind::Isotropic};
}

Waveform make_waveform(const ScenarioConfig& cfg) { return {cfg.bandwidth_hz}; }

QuadratureMesh make_mesh(const ScenarioConfig& cfg) {
    return {cfg.oracle_samples_per_wl, cfg.oracle_budget, cfg.oracle_lit_only != 0};
}

} // namespace nfem
