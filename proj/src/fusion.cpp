#include "forcefield/fusion.hpp"

#include <cmath>
#include <utility>

namespace forcefield {

Vec2 rotate_boat_to_world(BoatVec v, double heading_deg) {
    double h = deg2rad(heading_deg);
    double s = std::sin(h), c = std::cos(h);
    return {v.x * s + v.y * c, v.x * c - v.y * s};
}

BoatVec rotate_world_to_boat(Vec2 v, double heading_deg) {
    double h = deg2rad(heading_deg);
    double s = std::sin(h), c = std::cos(h);
    return {v.e * s + v.n * c, v.e * c - v.n * s};
}

BoatVec to_boat_vec(const PolarReading& r) {
    double b = deg2rad(r.bearing);
    return {r.speed * std::cos(b), r.speed * std::sin(b)};
}

PolarReading to_polar(const BoatVec& v) {
    double speed = std::hypot(v.x, v.y);
    if (speed == 0.0) return {0.0, 0.0};
    return {speed, wrap_deg(rad2deg(std::atan2(v.y, v.x)))};
}

Vec2 wind_world(const WindSample& w, const PoseSample& pose) {
    BoatVec flow = to_boat_vec({w.speed, w.direction_rel});
    return rotate_boat_to_world(flow, pose.heading) + pose.vel;
}

PairSelection select_pair(const CurrentQuad& q) {
    int i1 = 0;
    for (int i = 1; i < 4; ++i)
        if (q.f[i] > q.f[i1]) i1 = i;
    int cw = (i1 + 1) % 4;
    int ccw = (i1 + 3) % 4;
    int i2 = q.f[ccw] > q.f[cw] ? ccw : cw;
    return {i1, q.f[i1], i2, q.f[i2]};
}

BoatVec current_boat_frame(const PairSelection& sel) {
    double f1 = sel.f1, f2 = sel.f2;
    int i1 = sel.i1, i2 = sel.i2;
    if (f2 > f1) {  // cannot come out of select_pair; normalize foreign input
        std::swap(f1, f2);
        std::swap(i1, i2);
    }
    if (!(f1 > 0.0)) return {0.0, 0.0};
    double alpha = std::atan2(f2, f1);  // in [0, pi/4]
    double toward = (i2 == (i1 + 1) % 4) ? 1.0 : -1.0;
    double bearing = deg2rad(sensor_bearing_deg(i1)) + toward * alpha;
    double speed = std::hypot(f1, f2);
    return {speed * std::cos(bearing), speed * std::sin(bearing)};
}

Vec2 current_world(const CurrentQuad& q, const PoseSample& pose) {
    BoatVec flow = current_boat_frame(select_pair(q));
    return rotate_boat_to_world(flow, pose.heading) + pose.vel;
}

std::vector<FusedSample> fuse(std::span<const AlignedTuple> tuples, const GeoPoint& origin) {
    std::vector<FusedSample> out;
    out.reserve(tuples.size());
    for (const auto& tup : tuples) {
        FusedSample f;
        f.t = tup.t;
        f.pos = to_local(origin, tup.pose.pos);
        f.wind_world = wind_world(tup.wind, tup.pose);
        f.current_world = current_world(tup.current, tup.pose);
        f.depth = tup.depth.depth;
        f.boat_speed = tup.pose.vel.norm();
        f.heading = tup.pose.heading;
        out.push_back(f);
    }
    return out;
}

}  // namespace forcefield
