#pragma once

// Analytic ground-truth fields and a forward sensor simulator: the exact
// inverse of the fusion stage, used as the verification oracle for the
// whole pipeline.
//
// The simulated boat travels waypoint legs at constant speed with heading
// equal to the segment bearing. Sensor streams sample at their own rates
// with +-10% timestamp jitter. Samples near interior waypoints are
// blanked (turn_blank seconds on each side): heading flips instantly at a
// corner, and readings taken while the real vessel swings through a turn
// are routinely discarded in surveys for the same reason. The blanking
// also guarantees no aligned tuple ever mixes two different boat states as
// long as the sync slop stays below twice the blanking window.

#include <cstdint>
#include <string>
#include <vector>

#include "forcefield/fusion.hpp"
#include "forcefield/mission_log.hpp"

namespace forcefield {

struct DegenerateTrajectory : Error {
    using Error::Error;
};

struct VectorField {
    enum class Kind { Uniform, Shear, Vortex } kind = Kind::Uniform;
    Vec2 v0{};             // Uniform value; Shear value at y = 0
    Vec2 dvdy{};           // Shear change per meter of y
    LocalPoint center{};   // Vortex core center
    double strength = 0;   // Vortex peak tangential speed, m/s
    double radius = 1;     // Vortex core radius, m

    Vec2 at(const LocalPoint& p) const;
};

struct ScalarField {
    enum class Kind { Constant, Channel, Bump } kind = Kind::Constant;
    double value = 1;      // Constant depth
    char axis = 'x';       // Channel runs along this axis, centerline at 0
    double depth_max = 2;  // Channel centerline depth
    double width = 50;     // Channel width (half-width is the Gaussian sigma)
    LocalPoint center{};   // Bump center
    double amplitude = 1;  // Bump height above the 0.5 m base
    double sigma = 10;     // Bump radius

    double at(const LocalPoint& p) const;
};

struct FieldSpec {
    VectorField wind;
    VectorField current;
    ScalarField depth;
    // current speed scales by (couple_dref / depth)^couple_gamma when gamma > 0
    double couple_gamma = 0;
    double couple_dref = 1;
};

struct Truth {
    Vec2 wind;
    Vec2 current;
    double depth = 0;
};

Truth truth_at(const FieldSpec& f, const LocalPoint& p);

struct Trajectory {
    std::vector<LocalPoint> waypoints;
    double speed = 1.0;  // m/s along the legs
};

struct Rates {
    double pose = 5, wind = 4, current = 10, depth = 1;  // Hz
};

struct NoiseSpec {
    double pose = 0;     // meters per position axis
    double wind = 0;     // m/s per boat-frame component
    double current = 0;  // m/s per sensor
    double depth = 0;    // meters
};

struct ScenarioSpec {
    GeoPoint origin{34.0, -81.0};
    std::string mission_id = "sim";
    FieldSpec field;
    Trajectory trajectory;
    Rates rates;
    NoiseSpec noise;
    double turn_blank = 0.3;  // seconds blanked each side of interior waypoints
    uint64_t seed = 0;
};

/// Clipped-cosine quad response to a boat-frame relative flow: sensor i
/// reads the flow component along its axis, zero beyond 90 degrees off.
std::array<double, 4> cone_readings(const BoatVec& rel_flow);

/// Forward-simulate a mission. Deterministic for a given spec.
MissionLog simulate_run(const ScenarioSpec& s);

struct BBox {
    double x_min = 0, y_min = 0, x_max = 0, y_max = 0;
};

/// Boustrophedon north-south legs spaced `spacing` apart across the box.
Trajectory lawnmower(const BBox& box, double spacing, double speed);

}  // namespace forcefield
