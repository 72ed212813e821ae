#pragma once

// Typed per-sensor streams parsed from a mission log, plus the canonical
// "forcefield-log v1" serializer.
//
// Interchange format, line oriented, UTF-8, '\n' terminated:
//   forcefield-log v1,<origin_lat>,<origin_lon>[,<mission_id>]
//   pose,<t>,<lat>,<lon>,<vel_e>,<vel_n>,<heading>
//   wind,<t>,<speed>,<direction_rel>
//   current,<t>,<f0>,<f1>,<f2>,<f3>
//   depth,<t>,<depth_m>

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "forcefield/telemetry.hpp"

namespace forcefield {

struct EmptyLog : Error {
    using Error::Error;
};

struct MissionLog {
    std::string mission_id;
    GeoPoint origin;
    std::vector<PoseSample> pose;
    std::vector<WindSample> wind;
    std::vector<CurrentQuad> current;
    std::vector<DepthSample> depth;

    double start_time() const;  // min timestamp across streams
    double end_time() const;    // max timestamp across streams
};

struct ParseStats {
    std::size_t skipped = 0;     // records with unparseable or out-of-range fields
    std::size_t duplicates = 0;  // same-timestamp records dropped (first kept)
};

/// Parse a forcefield-log v1 file. Streams come back sorted by time and
/// de-duplicated; invalid records are skipped and counted, a bad header or
/// an empty pose stream is fatal.
MissionLog parse_log(const std::filesystem::path& path, ParseStats* stats = nullptr);
MissionLog parse_log_text(std::string_view text, ParseStats* stats = nullptr);

void write_log(const MissionLog& log, const std::filesystem::path& path);
std::string write_log_text(const MissionLog& log);

}  // namespace forcefield
