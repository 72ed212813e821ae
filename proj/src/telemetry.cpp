#include "forcefield/telemetry.hpp"

namespace forcefield {

double wrap_deg(double a) {
    double r = std::fmod(a, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;  // fmod residue of a tiny negative can round up to 360
    return r;
}

LocalPoint to_local(const GeoPoint& origin, const GeoPoint& p) {
    double dlat = p.lat - origin.lat;
    double dlon = p.lon - origin.lon;
    if (dlon > 180.0) dlon -= 360.0;
    if (dlon < -180.0) dlon += 360.0;
    if (!(std::abs(dlat) < 1.0) || !(std::abs(dlon) < 1.0))
        throw OutOfRegion("point more than 1 degree from origin");
    double x = kEarthRadiusM * deg2rad(dlon) * std::cos(deg2rad(origin.lat));
    double y = kEarthRadiusM * deg2rad(dlat);
    return {x, y};
}

GeoPoint to_geo(const GeoPoint& origin, const LocalPoint& p) {
    double lat = origin.lat + rad2deg(p.y / kEarthRadiusM);
    double lon = origin.lon + rad2deg(p.x / (kEarthRadiusM * std::cos(deg2rad(origin.lat))));
    return {lat, lon};
}

}  // namespace forcefield
