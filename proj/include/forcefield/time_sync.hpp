#pragma once

// Multi-rate stream alignment. Pose is the pivot stream: for each pose
// sample the nearest unconsumed sample of every other stream is picked,
// and a tuple is emitted only when all of them fall within the slop.

#include <vector>

#include "forcefield/mission_log.hpp"

namespace forcefield {

struct InvalidSlop : Error {
    using Error::Error;
};

struct AlignedTuple {
    double t = 0.0;  // == pose.t
    PoseSample pose;
    WindSample wind;
    CurrentQuad current;
    DepthSample depth;
};

/// Deterministic greedy alignment.
///
/// For each pose sample in order, the unconsumed sample with minimal |dt|
/// is selected from each other stream (ties break toward the earlier
/// sample). The tuple is emitted, and those samples consumed, only when
/// the total timestamp spread stays within `slop`; otherwise the pose
/// sample is skipped and the candidates stay available. The spread bound
/// implies every member lies within `slop` of the pivot.
std::vector<AlignedTuple> align(const MissionLog& log, double slop);

}  // namespace forcefield
