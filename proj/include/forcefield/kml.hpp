#pragma once

// KML 2.2 subset (Document/Placemark/LineString/coordinates) for visual
// trajectory inspection, plus a matching reader.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "forcefield/mission_log.hpp"

namespace forcefield {

/// One LineString of "lon,lat" pairs in pose order.
std::string kml_text(const MissionLog& log);
void export_kml(const MissionLog& log, const std::filesystem::path& path);

/// Read back the coordinate list of the first <coordinates> block.
std::vector<GeoPoint> parse_kml_track_text(std::string_view xml);
std::vector<GeoPoint> read_kml_track(const std::filesystem::path& path);

}  // namespace forcefield
