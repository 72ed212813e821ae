#include "forcefield/simulate.hpp"

#include <algorithm>
#include <cmath>

#include "forcefield/util.hpp"

namespace forcefield {

Vec2 VectorField::at(const LocalPoint& p) const {
    switch (kind) {
        case Kind::Uniform:
            return v0;
        case Kind::Shear:
            return v0 + p.y * dvdy;
        case Kind::Vortex: {
            double dx = p.x - center.x, dy = p.y - center.y;
            double r = std::hypot(dx, dy);
            if (r < 1e-12) return {0.0, 0.0};
            double vt = strength * (r <= radius ? r / radius : radius / r);
            return {vt * (-dy / r), vt * (dx / r)};  // counter-clockwise
        }
    }
    return {};
}

double ScalarField::at(const LocalPoint& p) const {
    switch (kind) {
        case Kind::Constant:
            return value;
        case Kind::Channel: {
            double c = (axis == 'x') ? p.y : p.x;
            double floor_depth = std::max(0.1, 0.1 * depth_max);
            double s = width / 2.0;
            return floor_depth + (depth_max - floor_depth) * std::exp(-0.5 * (c / s) * (c / s));
        }
        case Kind::Bump: {
            double dx = p.x - center.x, dy = p.y - center.y;
            double r2 = dx * dx + dy * dy;
            return 0.5 + amplitude * std::exp(-0.5 * r2 / (sigma * sigma));
        }
    }
    return 1.0;
}

Truth truth_at(const FieldSpec& f, const LocalPoint& p) {
    Truth t;
    t.wind = f.wind.at(p);
    t.depth = f.depth.at(p);
    t.current = f.current.at(p);
    if (f.couple_gamma > 0.0)
        t.current = std::pow(f.couple_dref / t.depth, f.couple_gamma) * t.current;
    return t;
}

std::array<double, 4> cone_readings(const BoatVec& rel_flow) {
    std::array<double, 4> f{};
    for (int i = 0; i < 4; ++i) {
        double b = deg2rad(sensor_bearing_deg(i));
        double along = rel_flow.x * std::cos(b) + rel_flow.y * std::sin(b);
        f[i] = std::max(0.0, along);
    }
    return f;
}

namespace {

struct PathState {
    LocalPoint pos;
    Vec2 vel;
    double heading = 0;
};

class Path {
public:
    Path(const std::vector<LocalPoint>& wp, double speed) : speed_(speed) {
        if (wp.size() < 2) throw DegenerateTrajectory("need at least 2 waypoints");
        if (!(speed > 0.0)) throw DegenerateTrajectory("boat speed must be positive");
        cum_.push_back(0.0);
        for (size_t i = 0; i + 1 < wp.size(); ++i) {
            double dx = wp[i + 1].x - wp[i].x;
            double dy = wp[i + 1].y - wp[i].y;
            double len = std::hypot(dx, dy);
            if (len < 1e-9) throw DegenerateTrajectory("repeated waypoint in trajectory");
            dir_.push_back({dx / len, dy / len});
            heading_.push_back(wrap_deg(rad2deg(std::atan2(dx / len, dy / len))));
            cum_.push_back(cum_.back() + len);
        }
        start_ = wp;
    }

    double duration() const { return cum_.back() / speed_; }

    // Times at which the boat passes interior waypoints.
    std::vector<double> corner_times() const {
        std::vector<double> out;
        for (size_t i = 1; i + 1 < cum_.size(); ++i) out.push_back(cum_[i] / speed_);
        return out;
    }

    PathState at(double t) const {
        double s = std::clamp(t * speed_, 0.0, cum_.back());
        size_t seg = std::upper_bound(cum_.begin(), cum_.end(), s) - cum_.begin();
        seg = std::min(std::max<size_t>(seg, 1), dir_.size()) - 1;
        double along = s - cum_[seg];
        PathState st;
        st.pos = {start_[seg].x + along * dir_[seg].e, start_[seg].y + along * dir_[seg].n};
        st.vel = speed_ * dir_[seg];
        st.heading = heading_[seg];
        return st;
    }

private:
    double speed_;
    std::vector<LocalPoint> start_;
    std::vector<Vec2> dir_;
    std::vector<double> heading_;
    std::vector<double> cum_;
};

// Jittered sample times at `rate`, with turn blanking applied.
std::vector<double> sample_times(double rate, double duration, const std::vector<double>& corners,
                                 double blank, Rng& rng) {
    std::vector<double> out;
    double period = 1.0 / rate;
    for (long k = 0; k * period <= duration; ++k) {
        double t = k * period + rng.uniform(-0.1 * period, 0.1 * period);
        t = std::clamp(t, 0.0, duration);
        bool blanked = false;
        for (double c : corners)
            if (std::abs(t - c) < blank) {
                blanked = true;
                break;
            }
        if (!blanked) out.push_back(t);
    }
    return out;
}

}  // namespace

MissionLog simulate_run(const ScenarioSpec& s) {
    if (!(s.rates.pose > 0 && s.rates.wind > 0 && s.rates.current > 0 && s.rates.depth > 0))
        throw DegenerateTrajectory("stream rates must be positive");
    Path path(s.trajectory.waypoints, s.trajectory.speed);
    const double duration = path.duration();
    const auto corners = path.corner_times();

    MissionLog log;
    log.mission_id = s.mission_id;
    log.origin = s.origin;

    {
        Rng rng(splitmix64(s.seed ^ 0x706f7365ULL));  // pose stream
        for (double t : sample_times(s.rates.pose, duration, corners, s.turn_blank, rng)) {
            PathState st = path.at(t);
            LocalPoint p = st.pos;
            p.x += rng.normal(s.noise.pose);
            p.y += rng.normal(s.noise.pose);
            log.pose.push_back({t, to_geo(s.origin, p), st.vel, st.heading});
        }
    }
    {
        Rng rng(splitmix64(s.seed ^ 0x77696e64ULL));  // wind stream
        for (double t : sample_times(s.rates.wind, duration, corners, s.turn_blank, rng)) {
            PathState st = path.at(t);
            Vec2 apparent = truth_at(s.field, st.pos).wind - st.vel;
            BoatVec ab = rotate_world_to_boat(apparent, st.heading);
            ab.x += rng.normal(s.noise.wind);
            ab.y += rng.normal(s.noise.wind);
            PolarReading r = to_polar(ab);
            log.wind.push_back({t, r.speed, r.bearing});
        }
    }
    {
        Rng rng(splitmix64(s.seed ^ 0x63757272ULL));  // current stream
        for (double t : sample_times(s.rates.current, duration, corners, s.turn_blank, rng)) {
            PathState st = path.at(t);
            Vec2 rel = truth_at(s.field, st.pos).current - st.vel;
            auto f = cone_readings(rotate_world_to_boat(rel, st.heading));
            CurrentQuad q;
            q.t = t;
            for (int i = 0; i < 4; ++i) q.f[i] = std::max(0.0, f[i] + rng.normal(s.noise.current));
            log.current.push_back(q);
        }
    }
    {
        Rng rng(splitmix64(s.seed ^ 0x64657074ULL));  // depth stream
        for (double t : sample_times(s.rates.depth, duration, corners, s.turn_blank, rng)) {
            PathState st = path.at(t);
            double d = truth_at(s.field, st.pos).depth + rng.normal(s.noise.depth);
            log.depth.push_back({t, std::max(d, 0.01)});
        }
    }
    return log;
}

Trajectory lawnmower(const BBox& box, double spacing, double speed) {
    if (!(spacing > 0.0)) throw DegenerateTrajectory("spacing must be positive");
    Trajectory traj;
    traj.speed = speed;
    int legs = static_cast<int>(std::floor((box.x_max - box.x_min) / spacing + 1e-9)) + 1;
    for (int k = 0; k < legs; ++k) {
        double x = box.x_min + k * spacing;
        if (k % 2 == 0) {
            traj.waypoints.push_back({x, box.y_min});
            traj.waypoints.push_back({x, box.y_max});
        } else {
            traj.waypoints.push_back({x, box.y_max});
            traj.waypoints.push_back({x, box.y_min});
        }
    }
    return traj;
}

}  // namespace forcefield
