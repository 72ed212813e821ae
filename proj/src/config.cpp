#include "forcefield/config.hpp"

#include <fstream>
#include <sstream>

#include "forcefield/util.hpp"

namespace forcefield {

Ini Ini::parse_text(std::string_view text) {
    Ini ini;
    std::string section;
    size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#' || line.front() == ';') continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(line_no) + ": unterminated section");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        std::string key(trim(line.substr(0, eq)));
        std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
        ini.sections_[section][key] = value;
    }
    return ini;
}

Ini Ini::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str());
}

bool Ini::has(const std::string& section, const std::string& key) const {
    auto s = sections_.find(section);
    return s != sections_.end() && s->second.count(key) > 0;
}

std::string Ini::get(const std::string& section, const std::string& key,
                     const std::string& fallback) const {
    auto s = sections_.find(section);
    if (s == sections_.end()) return fallback;
    auto k = s->second.find(key);
    return k == s->second.end() ? fallback : k->second;
}

double Ini::get_double(const std::string& section, const std::string& key, double fallback) const {
    if (!has(section, key)) return fallback;
    double v = 0.0;
    if (!parse_double(get(section, key, ""), v))
        throw ConfigError("bad number for " + section + "." + key);
    return v;
}

uint64_t Ini::get_u64(const std::string& section, const std::string& key, uint64_t fallback) const {
    if (!has(section, key)) return fallback;
    uint64_t v = 0;
    if (!parse_u64(get(section, key, ""), v))
        throw ConfigError("bad integer for " + section + "." + key);
    return v;
}

namespace {

constexpr const char* kSec = "scenario";

VectorField vector_field_from_ini(const Ini& ini, const std::string& prefix) {
    VectorField f;
    std::string kind = ini.get(kSec, prefix, "uniform");
    if (kind == "uniform") {
        f.kind = VectorField::Kind::Uniform;
        f.v0 = {ini.get_double(kSec, prefix + "_e", 0.0), ini.get_double(kSec, prefix + "_n", 0.0)};
    } else if (kind == "shear") {
        f.kind = VectorField::Kind::Shear;
        f.v0 = {ini.get_double(kSec, prefix + "_e", 0.0), ini.get_double(kSec, prefix + "_n", 0.0)};
        f.dvdy = {ini.get_double(kSec, prefix + "_dvdy_e", 0.0),
                  ini.get_double(kSec, prefix + "_dvdy_n", 0.0)};
    } else if (kind == "vortex") {
        f.kind = VectorField::Kind::Vortex;
        f.center = {ini.get_double(kSec, prefix + "_cx", 0.0),
                    ini.get_double(kSec, prefix + "_cy", 0.0)};
        f.strength = ini.get_double(kSec, prefix + "_strength", 1.0);
        f.radius = ini.get_double(kSec, prefix + "_radius", 10.0);
        if (!(f.radius > 0.0)) throw ConfigError(prefix + "_radius must be positive");
    } else {
        throw ConfigError("unknown " + prefix + " field kind: " + kind);
    }
    return f;
}

ScalarField depth_field_from_ini(const Ini& ini) {
    ScalarField f;
    std::string kind = ini.get(kSec, "depth", "constant");
    if (kind == "constant") {
        f.kind = ScalarField::Kind::Constant;
        f.value = ini.get_double(kSec, "depth_value", 3.0);
        if (!(f.value > 0.0)) throw ConfigError("depth_value must be positive");
    } else if (kind == "channel") {
        f.kind = ScalarField::Kind::Channel;
        std::string axis = ini.get(kSec, "depth_axis", "x");
        if (axis != "x" && axis != "y") throw ConfigError("depth_axis must be x or y");
        f.axis = axis[0];
        f.depth_max = ini.get_double(kSec, "depth_max", 2.0);
        f.width = ini.get_double(kSec, "depth_width", 50.0);
        if (!(f.depth_max > 0.0) || !(f.width > 0.0))
            throw ConfigError("channel depth_max and depth_width must be positive");
    } else if (kind == "bump") {
        f.kind = ScalarField::Kind::Bump;
        f.center = {ini.get_double(kSec, "depth_cx", 0.0), ini.get_double(kSec, "depth_cy", 0.0)};
        f.amplitude = ini.get_double(kSec, "depth_amplitude", 1.0);
        f.sigma = ini.get_double(kSec, "depth_sigma", 10.0);
        if (!(f.amplitude >= 0.0) || !(f.sigma > 0.0))
            throw ConfigError("bump amplitude must be >= 0 and sigma positive");
    } else {
        throw ConfigError("unknown depth field kind: " + kind);
    }
    return f;
}

Trajectory trajectory_from_ini(const Ini& ini) {
    double speed = ini.get_double(kSec, "boat_speed", 1.5);
    if (!(speed > 0.0)) throw ConfigError("boat_speed must be positive");
    std::string kind = ini.get(kSec, "trajectory", "lawnmower");
    if (kind == "lawnmower") {
        std::string bbox = ini.get(kSec, "bbox", "0,0,100,100");
        auto tok = split(bbox, ',');
        BBox box;
        if (tok.size() != 4 || !parse_double(tok[0], box.x_min) || !parse_double(tok[1], box.y_min) ||
            !parse_double(tok[2], box.x_max) || !parse_double(tok[3], box.y_max) ||
            box.x_max <= box.x_min || box.y_max <= box.y_min)
            throw ConfigError("bbox must be x_min,y_min,x_max,y_max");
        double spacing = ini.get_double(kSec, "spacing", 10.0);
        if (!(spacing > 0.0)) throw ConfigError("spacing must be positive");
        return lawnmower(box, spacing, speed);
    }
    if (kind == "waypoints") {
        Trajectory traj;
        traj.speed = speed;
        for (auto part : split(ini.get(kSec, "waypoints", ""), ';')) {
            part = trim(part);
            if (part.empty()) continue;
            auto xy = split(part, ',');
            double x = 0, y = 0;
            if (xy.size() != 2 || !parse_double(xy[0], x) || !parse_double(xy[1], y))
                throw ConfigError("waypoints must be 'x,y; x,y; ...'");
            traj.waypoints.push_back({x, y});
        }
        if (traj.waypoints.size() < 2) throw ConfigError("need at least 2 waypoints");
        return traj;
    }
    throw ConfigError("unknown trajectory kind: " + kind);
}

}  // namespace

ScenarioSpec scenario_from_ini(const Ini& ini) {
    ScenarioSpec s;
    s.origin.lat = ini.get_double(kSec, "origin_lat", 34.0);
    s.origin.lon = ini.get_double(kSec, "origin_lon", -81.0);
    if (std::abs(s.origin.lat) > 90.0 || std::abs(s.origin.lon) > 180.0)
        throw ConfigError("origin out of range");
    s.mission_id = ini.get(kSec, "mission_id", "sim");
    s.seed = ini.get_u64(kSec, "seed", 0);
    s.trajectory = trajectory_from_ini(ini);
    s.field.wind = vector_field_from_ini(ini, "wind");
    s.field.current = vector_field_from_ini(ini, "current");
    s.field.depth = depth_field_from_ini(ini);
    s.field.couple_gamma = ini.get_double(kSec, "couple_gamma", 0.0);
    s.field.couple_dref = ini.get_double(kSec, "couple_dref", 1.0);
    s.rates.pose = ini.get_double(kSec, "rate_pose", 5.0);
    s.rates.wind = ini.get_double(kSec, "rate_wind", 4.0);
    s.rates.current = ini.get_double(kSec, "rate_current", 10.0);
    s.rates.depth = ini.get_double(kSec, "rate_depth", 1.0);
    if (!(s.rates.pose > 0 && s.rates.wind > 0 && s.rates.current > 0 && s.rates.depth > 0))
        throw ConfigError("stream rates must be positive");
    s.noise.pose = ini.get_double(kSec, "noise_pose", 0.0);
    s.noise.wind = ini.get_double(kSec, "noise_wind", 0.0);
    s.noise.current = ini.get_double(kSec, "noise_current", 0.0);
    s.noise.depth = ini.get_double(kSec, "noise_depth", 0.0);
    if (s.noise.pose < 0 || s.noise.wind < 0 || s.noise.current < 0 || s.noise.depth < 0)
        throw ConfigError("noise sigmas must be >= 0");
    s.turn_blank = ini.get_double(kSec, "turn_blank", 0.3);
    if (s.turn_blank < 0) throw ConfigError("turn_blank must be >= 0");
    return s;
}

GpConfig gp_from_ini(const Ini& ini) {
    GpConfig g;
    std::string name = ini.get("gp", "kernel", "matern32");
    if (!kernel_from_name(name, g.kernel)) throw ConfigError("unknown kernel: " + name);
    double budget = ini.get_double("gp", "budget", 150);
    if (!(budget >= 1)) throw ConfigError("gp budget must be >= 1");
    g.budget = static_cast<int>(budget);
    g.seed = ini.get_u64("gp", "seed", 1);
    g.slop = ini.get_double("gp", "slop", 0.25);
    if (!(g.slop > 0)) throw ConfigError("slop must be positive");
    return g;
}

GridConfig grid_from_ini(const Ini& ini) {
    GridConfig g;
    g.resolution = ini.get_double("grid", "resolution", 2.0);
    g.margin = ini.get_double("grid", "margin", 5.0);
    if (!(g.resolution > 0)) throw ConfigError("grid resolution must be positive");
    if (g.margin < 0) throw ConfigError("grid margin must be >= 0");
    return g;
}

}  // namespace forcefield
