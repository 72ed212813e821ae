#pragma once

// Core domain types shared by every stage: geodetic and local-plane
// positions, world-frame vectors, and the raw per-sensor sample records.
//
// Conventions, fixed project-wide:
//   - world frame is local ENU: x east, y north, meters from a geodetic origin
//   - compass bearings are degrees clockwise from true north, in [0, 360)
//   - boat frame is x forward, y starboard
//   - the four current sensors sit at boat-frame bearings 45/135/225/315 deg
//     (index 0 bow-starboard, 1 stern-starboard, 2 stern-port, 3 bow-port)

#include <array>
#include <cmath>
#include <numbers>

#include "forcefield/errors.hpp"

namespace forcefield {

inline constexpr double kEarthRadiusM = 6'371'000.0;

struct OutOfRegion : Error {
    using Error::Error;
};

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Normalize an angle in degrees to [0, 360).
double wrap_deg(double a);

/// Geodetic position in degrees. lat in [-90, 90], lon in [-180, 180].
struct GeoPoint {
    double lat = 0.0;
    double lon = 0.0;
};

/// Position in the local tangent plane, meters east/north of the origin.
struct LocalPoint {
    double x = 0.0;
    double y = 0.0;
};

/// World-frame vector, east/north components in m/s.
struct Vec2 {
    double e = 0.0;
    double n = 0.0;
    double norm() const { return std::hypot(e, n); }
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.e + b.e, a.n + b.n}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.e - b.e, a.n - b.n}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.e, s * v.n}; }

/// Scalar reading as (speed, compass-style bearing).
struct PolarReading {
    double speed = 0.0;    // m/s, >= 0
    double bearing = 0.0;  // degrees in [0, 360)
};

struct PoseSample {
    double t = 0.0;  // seconds
    GeoPoint pos;
    Vec2 vel;              // ground velocity, world frame
    double heading = 0.0;  // compass degrees
};

struct WindSample {
    double t = 0.0;
    double speed = 0.0;          // m/s, apparent airflow magnitude
    double direction_rel = 0.0;  // bearing the air moves, relative to the bow
};

struct CurrentQuad {
    double t = 0.0;
    std::array<double, 4> f{};  // m/s, >= 0, indexed per sensor layout above
};

struct DepthSample {
    double t = 0.0;
    double depth = 0.0;  // meters, > 0
};

/// Boat-frame bearing of current sensor i, degrees clockwise from the bow.
inline double sensor_bearing_deg(int i) { return 45.0 + 90.0 * i; }

/// Equirectangular tangent-plane projection. Valid for points within
/// 1 degree of the origin; throws OutOfRegion otherwise.
LocalPoint to_local(const GeoPoint& origin, const GeoPoint& p);

/// Exact inverse of to_local.
GeoPoint to_geo(const GeoPoint& origin, const LocalPoint& p);

}  // namespace forcefield
