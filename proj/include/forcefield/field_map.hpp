#pragma once

// Gridded posterior maps over the survey region and their CSV/GeoJSON
// exports.
//
// Layers rendered from the fitted models, in fixed order:
//   depth, wind_e, wind_n, wind_speed, wind_dir,
//   current_e, current_n, current_speed, current_dir
// Speed and direction derive from the component means; their variance
// column carries var_e + var_n as an uncalibrated spread proxy.

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "forcefield/fusion.hpp"
#include "forcefield/gp.hpp"

namespace forcefield {

struct EmptyInput : Error {
    using Error::Error;
};
struct NonPositiveResolution : Error {
    using Error::Error;
};

struct FieldGrid {
    GeoPoint origin;
    double x_min = 0, x_max = 0, y_min = 0, y_max = 0;
    double resolution = 1.0;
    int nx = 1, ny = 1;

    LocalPoint node(int ix, int iy) const {
        return {x_min + ix * resolution, y_min + iy * resolution};
    }
    std::size_t cells() const { return static_cast<std::size_t>(nx) * ny; }
};

/// Row-major nx*ny values, y outer, x inner: index = iy*nx + ix.
struct FieldLayer {
    std::string name;
    std::vector<double> mean;
    std::vector<double> variance;
};

/// All fitted phenomena: scalar depth plus the two component fields.
struct PhenomenonModels {
    GpModel depth;
    VectorFieldGp wind;
    VectorFieldGp current;
};

/// Combined point prediction across the three phenomena.
struct ForceSample {
    Vec2 wind;
    double wind_var_e = 0, wind_var_n = 0;
    Vec2 current;
    double current_var_e = 0, current_var_n = 0;
    double depth = 0, depth_var = 0;
};

/// Data bounding box expanded by `margin`; node counts follow
/// floor(span / resolution) + 1.
FieldGrid build_grid(std::span<const FusedSample> samples, const GeoPoint& origin,
                     double resolution, double margin);

/// Same construction from an explicit bounding box.
FieldGrid grid_from_bbox(const GeoPoint& origin, double x_min, double y_min, double x_max,
                         double y_max, double resolution, double margin);

std::vector<FieldLayer> render(const PhenomenonModels& models, const FieldGrid& grid);

/// Exact GP prediction at p (no grid interpolation).
ForceSample query(const PhenomenonModels& models, const LocalPoint& p);

/// met_convention flips direction layers to "coming-from" (+180 deg).
std::string csv_text(const FieldGrid& grid, std::span<const FieldLayer> layers,
                     bool met_convention = false);
void export_csv(const FieldGrid& grid, std::span<const FieldLayer> layers,
                const std::filesystem::path& path, bool met_convention = false);

std::string geojson_text(const FieldGrid& grid, std::span<const FieldLayer> layers,
                         bool met_convention = false);
void export_geojson(const FieldGrid& grid, std::span<const FieldLayer> layers,
                    const std::filesystem::path& path, bool met_convention = false);

}  // namespace forcefield
