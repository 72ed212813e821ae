#pragma once

// Self-motion removal and boat-to-world frame rotation for wind and
// current readings.
//
// A flow sensor on a moving boat measures the true field minus the boat's
// own velocity, so the correction applied here is
//     true = rotate_to_world(measured_boat_frame) + v_boat,
// which makes still-air and still-water readings cancel exactly.

#include <span>
#include <vector>

#include "forcefield/telemetry.hpp"
#include "forcefield/time_sync.hpp"

namespace forcefield {

/// Vector in boat axes: x forward, y starboard.
struct BoatVec {
    double x = 0.0;
    double y = 0.0;
};

/// Aligned, motion-corrected, world-frame sample at a local ENU point.
struct FusedSample {
    double t = 0.0;
    LocalPoint pos;
    Vec2 wind_world;     // direction the air mass moves
    Vec2 current_world;  // direction the water moves
    double depth = 0.0;
    double boat_speed = 0.0;
    double heading = 0.0;
};

/// The two readings the trigonometric fusion works from: the maximum
/// sensor (F1) and the larger of its two ring neighbors (F2).
struct PairSelection {
    int i1 = 0;
    double f1 = 0.0;
    int i2 = 1;
    double f2 = 0.0;
};

/// Rotate boat-frame (forward, starboard) into world-frame (east, north).
/// The matrix is symmetric orthogonal, so it is also its own inverse.
Vec2 rotate_boat_to_world(BoatVec v, double heading_deg);
BoatVec rotate_world_to_boat(Vec2 v, double heading_deg);

/// Polar reading with a bow-relative bearing <-> boat-frame vector.
BoatVec to_boat_vec(const PolarReading& r);
PolarReading to_polar(const BoatVec& v);

/// True world-frame wind from an apparent reading and the boat pose.
Vec2 wind_world(const WindSample& w, const PoseSample& pose);

/// F1 = argmax reading (ties to the lowest index); F2 = the larger ring
/// neighbor of F1 (tie to the clockwise neighbor).
PairSelection select_pair(const CurrentQuad& q);

/// Invert the cosine projection of two orthogonal sensors: speed is
/// hypot(f1, f2), and the flow bearing sits atan2(f2, f1) off the F1 axis
/// toward the F2 axis.
BoatVec current_boat_frame(const PairSelection& sel);

/// True world-frame surface current from a quad reading and the boat pose.
Vec2 current_world(const CurrentQuad& q, const PoseSample& pose);

/// Apply the corrections to every tuple; pos is projected about `origin`.
std::vector<FusedSample> fuse(std::span<const AlignedTuple> tuples, const GeoPoint& origin);

}  // namespace forcefield
