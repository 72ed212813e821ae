#include "forcefield/field_map.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "forcefield/util.hpp"

namespace forcefield {

namespace {

int node_count(double span, double resolution) {
    // tiny epsilon so exact multiples of the resolution stay exact
    return static_cast<int>(std::floor(span / resolution + 1e-9)) + 1;
}

bool is_direction_layer(const std::string& name) {
    return name == "wind_dir" || name == "current_dir";
}

double export_value(const FieldLayer& layer, std::size_t idx, bool met_convention) {
    double v = layer.mean[idx];
    if (met_convention && is_direction_layer(layer.name)) v = wrap_deg(v + 180.0);
    return v;
}

}  // namespace

FieldGrid grid_from_bbox(const GeoPoint& origin, double x_min, double y_min, double x_max,
                         double y_max, double resolution, double margin) {
    if (!(resolution > 0.0)) throw NonPositiveResolution("resolution must be positive");
    FieldGrid g;
    g.origin = origin;
    g.x_min = x_min - margin;
    g.x_max = x_max + margin;
    g.y_min = y_min - margin;
    g.y_max = y_max + margin;
    g.resolution = resolution;
    g.nx = node_count(g.x_max - g.x_min, resolution);
    g.ny = node_count(g.y_max - g.y_min, resolution);
    return g;
}

FieldGrid build_grid(std::span<const FusedSample> samples, const GeoPoint& origin,
                     double resolution, double margin) {
    if (samples.empty()) throw EmptyInput("no samples to grid");
    double x_min = samples[0].pos.x, x_max = x_min;
    double y_min = samples[0].pos.y, y_max = y_min;
    for (const auto& s : samples) {
        x_min = std::min(x_min, s.pos.x);
        x_max = std::max(x_max, s.pos.x);
        y_min = std::min(y_min, s.pos.y);
        y_max = std::max(y_max, s.pos.y);
    }
    return grid_from_bbox(origin, x_min, y_min, x_max, y_max, resolution, margin);
}

std::vector<FieldLayer> render(const PhenomenonModels& models, const FieldGrid& grid) {
    const std::size_t cells = grid.cells();
    std::vector<FieldLayer> layers(9);
    const char* names[] = {"depth",     "wind_e",    "wind_n",        "wind_speed",  "wind_dir",
                           "current_e", "current_n", "current_speed", "current_dir"};
    for (int i = 0; i < 9; ++i) {
        layers[i].name = names[i];
        layers[i].mean.resize(cells);
        layers[i].variance.resize(cells);
    }

    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            std::size_t idx = static_cast<std::size_t>(iy) * grid.nx + ix;
            LocalPoint p = grid.node(ix, iy);
            ForceSample f = query(models, p);

            layers[0].mean[idx] = f.depth;
            layers[0].variance[idx] = f.depth_var;
            layers[1].mean[idx] = f.wind.e;
            layers[1].variance[idx] = f.wind_var_e;
            layers[2].mean[idx] = f.wind.n;
            layers[2].variance[idx] = f.wind_var_n;
            layers[3].mean[idx] = f.wind.norm();
            layers[3].variance[idx] = f.wind_var_e + f.wind_var_n;
            layers[4].mean[idx] = wrap_deg(rad2deg(std::atan2(f.wind.e, f.wind.n)));
            layers[4].variance[idx] = f.wind_var_e + f.wind_var_n;
            layers[5].mean[idx] = f.current.e;
            layers[5].variance[idx] = f.current_var_e;
            layers[6].mean[idx] = f.current.n;
            layers[6].variance[idx] = f.current_var_n;
            layers[7].mean[idx] = f.current.norm();
            layers[7].variance[idx] = f.current_var_e + f.current_var_n;
            layers[8].mean[idx] = wrap_deg(rad2deg(std::atan2(f.current.e, f.current.n)));
            layers[8].variance[idx] = f.current_var_e + f.current_var_n;
        }
    }
    return layers;
}

ForceSample query(const PhenomenonModels& models, const LocalPoint& p) {
    ForceSample f;
    Prediction d = models.depth.predict(p);
    f.depth = d.mean;
    f.depth_var = d.variance;
    Prediction we = models.wind.east.predict(p);
    Prediction wn = models.wind.north.predict(p);
    f.wind = {we.mean, wn.mean};
    f.wind_var_e = we.variance;
    f.wind_var_n = wn.variance;
    Prediction ce = models.current.east.predict(p);
    Prediction cn = models.current.north.predict(p);
    f.current = {ce.mean, cn.mean};
    f.current_var_e = ce.variance;
    f.current_var_n = cn.variance;
    return f;
}

std::string csv_text(const FieldGrid& grid, std::span<const FieldLayer> layers,
                     bool met_convention) {
    std::string out = "x,y,lat,lon";
    for (const auto& l : layers) out += ',' + l.name + ',' + l.name + "_var";
    out += '\n';

    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            std::size_t idx = static_cast<std::size_t>(iy) * grid.nx + ix;
            LocalPoint p = grid.node(ix, iy);
            GeoPoint g = to_geo(grid.origin, p);
            out += fmt_double(p.x) + ',' + fmt_double(p.y) + ',' + fmt_double(g.lat) + ',' +
                   fmt_double(g.lon);
            for (const auto& l : layers)
                out += ',' + fmt_double(export_value(l, idx, met_convention)) + ',' +
                       fmt_double(l.variance[idx]);
            out += '\n';
        }
    }
    return out;
}

void export_csv(const FieldGrid& grid, std::span<const FieldLayer> layers,
                const std::filesystem::path& path, bool met_convention) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << csv_text(grid, layers, met_convention);
    if (!out) throw IoError("write failed: " + path.string());
}

std::string geojson_text(const FieldGrid& grid, std::span<const FieldLayer> layers,
                         bool met_convention) {
    nlohmann::json features = nlohmann::json::array();
    for (int iy = 0; iy < grid.ny; ++iy) {
        for (int ix = 0; ix < grid.nx; ++ix) {
            std::size_t idx = static_cast<std::size_t>(iy) * grid.nx + ix;
            LocalPoint p = grid.node(ix, iy);
            GeoPoint g = to_geo(grid.origin, p);
            nlohmann::json props;
            for (const auto& l : layers) {
                props[l.name] = export_value(l, idx, met_convention);
                props[l.name + "_var"] = l.variance[idx];
            }
            features.push_back({{"type", "Feature"},
                                {"geometry", {{"type", "Point"}, {"coordinates", {g.lon, g.lat}}}},
                                {"properties", props}});
        }
    }
    nlohmann::json doc = {{"type", "FeatureCollection"}, {"features", features}};
    return doc.dump() + "\n";
}

void export_geojson(const FieldGrid& grid, std::span<const FieldLayer> layers,
                    const std::filesystem::path& path, bool met_convention) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << geojson_text(grid, layers, met_convention);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace forcefield
