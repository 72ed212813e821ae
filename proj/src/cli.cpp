#include "forcefield/cli.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "forcefield/config.hpp"
#include "forcefield/field_map.hpp"
#include "forcefield/gp.hpp"
#include "forcefield/kml.hpp"
#include "forcefield/mission_log.hpp"
#include "forcefield/simulate.hpp"
#include "forcefield/time_sync.hpp"
#include "forcefield/util.hpp"

namespace fs = std::filesystem;

namespace forcefield {

namespace {

constexpr std::string_view kFusedMagic = "# forcefield-fused v1";
constexpr std::string_view kFusedHeader =
    "t,x,y,lat,lon,wind_e,wind_n,current_e,current_n,depth,boat_speed,heading";

void write_text_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

// ---- fused sample interchange ---------------------------------------------

std::string fused_row(const GeoPoint& origin, const FusedSample& f) {
    GeoPoint g = to_geo(origin, f.pos);
    std::string row = fmt_double(f.t);
    for (double v : {f.pos.x, f.pos.y, g.lat, g.lon, f.wind_world.e, f.wind_world.n,
                     f.current_world.e, f.current_world.n, f.depth, f.boat_speed, f.heading})
        row += ',' + fmt_double(v);
    return row;
}

}  // namespace

std::string fused_csv_text(const GeoPoint& origin, std::span<const FusedSample> samples) {
    std::string out{kFusedMagic};
    out += ',' + fmt_double(origin.lat) + ',' + fmt_double(origin.lon) + '\n';
    out += kFusedHeader;
    out += '\n';
    for (const auto& f : samples) {
        out += fused_row(origin, f);
        out += '\n';
    }
    return out;
}

FusedFile read_fused_csv(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open fused file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();

    FusedFile out;
    size_t line_no = 0;
    for (auto raw : split(text, '\n')) {
        auto line = trim(raw);
        if (line.empty()) continue;
        ++line_no;
        if (line_no == 1) {
            auto tok = split(line, ',');
            if (tok.size() != 3 || tok[0] != kFusedMagic || !parse_double(tok[1], out.origin.lat) ||
                !parse_double(tok[2], out.origin.lon))
                throw FormatError("bad fused header: " + path.string());
            continue;
        }
        if (line_no == 2) {
            if (line != kFusedHeader) throw FormatError("bad fused column header");
            continue;
        }
        auto tok = split(line, ',');
        double v[12];
        if (tok.size() != 12) throw FormatError("bad fused row");
        for (int i = 0; i < 12; ++i)
            if (!parse_double(tok[i], v[i])) throw FormatError("bad fused row");
        FusedSample f;
        f.t = v[0];
        f.pos = {v[1], v[2]};
        f.wind_world = {v[5], v[6]};
        f.current_world = {v[7], v[8]};
        f.depth = v[9];
        f.boat_speed = v[10];
        f.heading = v[11];
        out.samples.push_back(f);
    }
    if (line_no < 2) throw FormatError("fused file has no header");
    return out;
}

namespace {

// ---- model fitting helpers -------------------------------------------------

Dataset scalar_dataset(std::span<const FusedSample> fused, const std::string& phenomenon) {
    Dataset d;
    for (const auto& f : fused) {
        d.X.push_back(f.pos);
        if (phenomenon == "depth") d.Y.push_back(f.depth);
        else if (phenomenon == "wind_e") d.Y.push_back(f.wind_world.e);
        else if (phenomenon == "wind_n") d.Y.push_back(f.wind_world.n);
        else if (phenomenon == "current_e") d.Y.push_back(f.current_world.e);
        else if (phenomenon == "current_n") d.Y.push_back(f.current_world.n);
        else throw Error("unknown phenomenon: " + phenomenon);
    }
    return d;
}

Dataset centered_copy(const Dataset& d) {
    double mean = 0.0;
    for (double y : d.Y) mean += y;
    mean /= static_cast<double>(d.Y.size());
    Dataset out = d;
    for (double& y : out.Y) y -= mean;
    return out;
}

// Optimize and fit one scalar phenomenon. Depth is centered.
GpModel fit_phenomenon(const Dataset& data, const std::string& phenomenon, KernelKind kind,
                       int budget, uint64_t seed) {
    bool centered = phenomenon == "depth";
    const Dataset& search = centered ? centered_copy(data) : data;
    KernelSpec spec =
        optimize_hyperparams(search, kind, default_init(search, kind), budget, seed);
    log_info("fit " + phenomenon + ": kernel=" + kernel_name(kind) +
             " sf2=" + fmt_double(spec.sigma_f2) + " sl=" + fmt_double(spec.sigma_l) +
             " sn2=" + fmt_double(spec.sigma_n2));
    return centered ? GpModel::fit_centered(data, spec) : GpModel::fit(data, spec);
}

PhenomenonModels fit_all(std::span<const FusedSample> fused, KernelKind kind, int budget,
                         uint64_t seed) {
    const char* names[] = {"depth", "wind_e", "wind_n", "current_e", "current_n"};
    std::vector<GpModel> models;
    for (int i = 0; i < 5; ++i)
        models.push_back(fit_phenomenon(scalar_dataset(fused, names[i]), names[i], kind, budget,
                                        splitmix64(seed ^ static_cast<uint64_t>(i + 1))));
    return {std::move(models[0]),
            {std::move(models[1]), std::move(models[2])},
            {std::move(models[3]), std::move(models[4])}};
}

// ---- kernel comparison table ------------------------------------------------

std::string kernel_table(std::span<const FusedSample> fused, int budget, uint64_t seed) {
    const KernelKind kinds[] = {KernelKind::Linear, KernelKind::SquaredExponential,
                                KernelKind::Exponential, KernelKind::Matern32};
    const char* phenomena[] = {"depth", "wind_e", "wind_n", "current_e", "current_n"};

    std::string out = "kernel,phenomenon,rmse,lml\n";
    for (KernelKind kind : kinds) {
        for (int pi = 0; pi < 5; ++pi) {
            Dataset full = scalar_dataset(fused, phenomena[pi]);
            size_t n = full.X.size();

            // deterministic 80/20 split, shared across kernels per phenomenon
            std::vector<size_t> idx(n);
            std::iota(idx.begin(), idx.end(), size_t{0});
            Rng rng(splitmix64(seed ^ (0x8020ULL + pi)));
            for (size_t i = n - 1; i > 0; --i)
                std::swap(idx[i], idx[rng.next_u64() % (i + 1)]);
            size_t n_train = std::max<size_t>(1, (4 * n) / 5);

            Dataset train;
            for (size_t i = 0; i < n_train; ++i) {
                train.X.push_back(full.X[idx[i]]);
                train.Y.push_back(full.Y[idx[i]]);
            }
            std::vector<size_t> test(idx.begin() + n_train, idx.end());
            if (test.empty()) test.assign(idx.begin(), idx.begin() + n_train);

            GpModel model = fit_phenomenon(train, phenomena[pi], kind, budget,
                                           splitmix64(seed ^ (0x7ab1eULL + pi)));
            double se = 0.0;
            for (size_t i : test) {
                double err = model.predict(full.X[i]).mean - full.Y[i];
                se += err * err;
            }
            double rmse = std::sqrt(se / static_cast<double>(test.size()));
            out += std::string(kernel_name(kind)) + ',' + phenomena[pi] + ',' + fmt_double(rmse) +
                   ',' + fmt_double(model.log_marginal_likelihood()) + '\n';
        }
    }
    return out;
}

// ---- subcommands -------------------------------------------------------------

struct PredictArgs {
    std::string models_dir;
    std::string fused_path;
    double res = 2.0, margin = 5.0;
    std::string out_dir;
    std::string at;
    bool met = false;
};

int cmd_simulate(const std::string& scenario_path, const std::string& out_path) {
    ScenarioSpec spec = scenario_from_ini(Ini::parse_file(scenario_path));
    MissionLog log = simulate_run(spec);
    write_log(log, out_path);
    log_info("simulate: " + std::to_string(log.pose.size()) + " pose samples -> " + out_path);
    return 0;
}

int cmd_inspect(const std::string& log_path, std::string kml_path, double max_gap) {
    MissionLog log = parse_log(log_path);
    if (kml_path.empty()) kml_path = log_path + ".kml";
    export_kml(log, kml_path);

    double duration = log.end_time() - log.start_time();
    auto stream_gap = [&](const auto& v) {
        if (v.size() < 2) return duration;  // missing stream counts as one mission-long hole
        double g = 0.0;
        for (size_t i = 1; i < v.size(); ++i) g = std::max(g, v[i].t - v[i - 1].t);
        return g;
    };
    struct Row {
        const char* name;
        double gap;
    } rows[] = {{"pose", stream_gap(log.pose)},
                {"wind", stream_gap(log.wind)},
                {"current", stream_gap(log.current)},
                {"depth", stream_gap(log.depth)}};

    bool failed = false;
    for (const auto& r : rows) {
        std::printf("max_gap,%s,%s\n", r.name, fmt_double(r.gap).c_str());
        if (max_gap > 0.0 && r.gap > max_gap) {
            std::printf("gap_exceeded,%s,%s\n", r.name, fmt_double(r.gap).c_str());
            failed = true;
        }
    }
    return failed ? 1 : 0;
}

int cmd_sync(const std::string& log_path, double slop, const std::string& out_path) {
    MissionLog log = parse_log(log_path);
    auto tuples = align(log, slop);
    std::string out{"# forcefield-sync v1,"};
    out += fmt_double(log.origin.lat) + ',' + fmt_double(log.origin.lon) + '\n';
    out +=
        "t,pose_t,lat,lon,vel_e,vel_n,heading,wind_t,wind_speed,wind_dir_rel,"
        "current_t,f0,f1,f2,f3,depth_t,depth\n";
    for (const auto& u : tuples) {
        std::string row = fmt_double(u.t);
        for (double v : {u.pose.t, u.pose.pos.lat, u.pose.pos.lon, u.pose.vel.e, u.pose.vel.n,
                         u.pose.heading, u.wind.t, u.wind.speed, u.wind.direction_rel, u.current.t,
                         u.current.f[0], u.current.f[1], u.current.f[2], u.current.f[3], u.depth.t,
                         u.depth.depth})
            row += ',' + fmt_double(v);
        out += row + '\n';
    }
    write_text_file(out_path, out);
    log_info("sync: " + std::to_string(tuples.size()) + " tuples -> " + out_path);
    return 0;
}

int cmd_fuse(const std::string& log_path, double slop, const std::string& out_path) {
    MissionLog log = parse_log(log_path);
    auto fused = fuse(align(log, slop), log.origin);
    write_text_file(out_path, fused_csv_text(log.origin, fused));
    log_info("fuse: " + std::to_string(fused.size()) + " samples -> " + out_path);
    return 0;
}

int cmd_fit(const std::string& fused_path, const std::string& phenomenon,
            const std::string& kernel, int budget, uint64_t seed, const std::string& out_dir) {
    KernelKind kind;
    if (!kernel_from_name(kernel, kind)) throw ConfigError("unknown kernel: " + kernel);
    if (budget < 1) throw ConfigError("budget must be >= 1");
    FusedFile fused = read_fused_csv(fused_path);
    if (fused.samples.empty()) throw EmptyLog("fused file has no samples");
    fs::create_directories(out_dir);

    auto fit_and_save = [&](const std::string& name, uint64_t tag) {
        GpModel m = fit_phenomenon(scalar_dataset(fused.samples, name), name, kind, budget,
                                   splitmix64(seed ^ tag));
        m.save(fs::path(out_dir) / (name + ".gp"));
    };
    if (phenomenon == "depth") {
        fit_and_save("depth", 1);
    } else if (phenomenon == "wind") {
        fit_and_save("wind_e", 2);
        fit_and_save("wind_n", 3);
    } else if (phenomenon == "current") {
        fit_and_save("current_e", 4);
        fit_and_save("current_n", 5);
    } else {
        throw ConfigError("phenomenon must be depth, wind, or current");
    }
    return 0;
}

int cmd_predict(const PredictArgs& a) {
    PhenomenonModels models{
        GpModel::load(fs::path(a.models_dir) / "depth.gp"),
        {GpModel::load(fs::path(a.models_dir) / "wind_e.gp"),
         GpModel::load(fs::path(a.models_dir) / "wind_n.gp")},
        {GpModel::load(fs::path(a.models_dir) / "current_e.gp"),
         GpModel::load(fs::path(a.models_dir) / "current_n.gp")}};

    if (!a.at.empty()) {
        auto tok = split(a.at, ',');
        double x = 0, y = 0;
        if (tok.size() != 2 || !parse_double(tok[0], x) || !parse_double(tok[1], y))
            throw ConfigError("--at expects x,y");
        ForceSample f = query(models, {x, y});
        std::printf("wind_e,%s\n", fmt_double(f.wind.e).c_str());
        std::printf("wind_n,%s\n", fmt_double(f.wind.n).c_str());
        std::printf("wind_var_e,%s\n", fmt_double(f.wind_var_e).c_str());
        std::printf("wind_var_n,%s\n", fmt_double(f.wind_var_n).c_str());
        std::printf("current_e,%s\n", fmt_double(f.current.e).c_str());
        std::printf("current_n,%s\n", fmt_double(f.current.n).c_str());
        std::printf("current_var_e,%s\n", fmt_double(f.current_var_e).c_str());
        std::printf("current_var_n,%s\n", fmt_double(f.current_var_n).c_str());
        std::printf("depth,%s\n", fmt_double(f.depth).c_str());
        std::printf("depth_var,%s\n", fmt_double(f.depth_var).c_str());
        return 0;
    }

    if (a.fused_path.empty()) throw ConfigError("predict needs --fused for grid bounds");
    FusedFile fused = read_fused_csv(a.fused_path);
    if (fused.samples.empty()) throw EmptyLog("fused file has no samples");
    FieldGrid grid = build_grid(fused.samples, fused.origin, a.res, a.margin);
    auto layers = render(models, grid);
    fs::create_directories(a.out_dir);
    export_csv(grid, layers, fs::path(a.out_dir) / "map.csv", a.met);
    export_geojson(grid, layers, fs::path(a.out_dir) / "map.geojson", a.met);
    return 0;
}

int cmd_pipeline(const std::string& config_path, const std::string& log_path,
                 const std::string& out_dir, bool met) {
    Ini ini = Ini::parse_file(config_path);
    GpConfig gp = gp_from_ini(ini);
    GridConfig grid_cfg = grid_from_ini(ini);
    fs::create_directories(out_dir);

    MissionLog log;
    if (!log_path.empty()) {
        log = parse_log(log_path);
    } else {
        log = simulate_run(scenario_from_ini(ini));
        write_log(log, fs::path(out_dir) / "simulated.log");
    }

    log_info("pipeline: aligning with slop " + fmt_double(gp.slop));
    auto tuples = align(log, gp.slop);
    if (tuples.empty()) {
        std::fprintf(stderr, "pipeline: no aligned tuples (slop too small or streams missing)\n");
        return 1;
    }
    auto fused = fuse(tuples, log.origin);
    write_text_file(fs::path(out_dir) / "fused.csv", fused_csv_text(log.origin, fused));

    log_info("pipeline: fitting models on " + std::to_string(fused.size()) + " samples");
    PhenomenonModels models = fit_all(fused, gp.kernel, gp.budget, gp.seed);
    models.depth.save(fs::path(out_dir) / "depth.gp");
    models.wind.east.save(fs::path(out_dir) / "wind_e.gp");
    models.wind.north.save(fs::path(out_dir) / "wind_n.gp");
    models.current.east.save(fs::path(out_dir) / "current_e.gp");
    models.current.north.save(fs::path(out_dir) / "current_n.gp");

    log_info("pipeline: rendering maps");
    FieldGrid grid = build_grid(fused, log.origin, grid_cfg.resolution, grid_cfg.margin);
    auto layers = render(models, grid);
    export_csv(grid, layers, fs::path(out_dir) / "map.csv", met);
    export_geojson(grid, layers, fs::path(out_dir) / "map.geojson", met);

    log_info("pipeline: kernel comparison table");
    write_text_file(fs::path(out_dir) / "kernels.csv", kernel_table(fused, gp.budget, gp.seed));
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"ASV force-field mapping pipeline"};
    app.require_subcommand(1);

    std::string scenario_path, log_path, out_path, fused_path, phenomenon, kernel = "matern32";
    std::string config_path, models_dir;
    double slop = 0.25, max_gap = 0.0;
    int budget = 150;
    uint64_t seed = 1;
    PredictArgs pargs;
    bool met = false;

    auto* sim = app.add_subcommand("simulate", "Generate a synthetic mission log");
    sim->add_option("--scenario", scenario_path, "scenario config file")->required();
    sim->add_option("--out", out_path, "output log path")->required();

    auto* insp = app.add_subcommand("inspect", "Export KML and report stream gaps");
    insp->add_option("--log", log_path, "mission log")->required();
    insp->add_option("--out", out_path, "output KML path (default <log>.kml)");
    insp->add_option("--max-gap", max_gap, "fail (exit 1) if any stream gap exceeds this");

    auto* sync = app.add_subcommand("sync", "Align streams into tuples");
    sync->add_option("--log", log_path)->required();
    sync->add_option("--slop", slop, "max tuple timestamp spread, seconds");
    sync->add_option("--out", out_path)->required();

    auto* fuse_cmd = app.add_subcommand("fuse", "Align and motion-correct a log");
    fuse_cmd->add_option("--log", log_path)->required();
    fuse_cmd->add_option("--slop", slop);
    fuse_cmd->add_option("--out", out_path)->required();

    auto* fit_cmd = app.add_subcommand("fit", "Fit GP models from fused samples");
    fit_cmd->add_option("--fused", fused_path)->required();
    fit_cmd->add_option("--phenomenon", phenomenon, "depth, wind, or current")->required();
    fit_cmd->add_option("--kernel", kernel);
    fit_cmd->add_option("--budget", budget);
    fit_cmd->add_option("--seed", seed);
    fit_cmd->add_option("--out", out_path, "output model directory")->required();

    auto* pred = app.add_subcommand("predict", "Render maps or query a point");
    pred->add_option("--models", pargs.models_dir)->required();
    pred->add_option("--fused", pargs.fused_path, "fused CSV for grid bounds and origin");
    pred->add_option("--res", pargs.res);
    pred->add_option("--margin", pargs.margin);
    pred->add_option("--out", pargs.out_dir);
    pred->add_option("--at", pargs.at, "query a single x,y point");
    pred->add_flag("--met-convention", pargs.met, "emit coming-from directions");

    auto* pipe = app.add_subcommand("pipeline", "Run sync, fuse, fit, render, export");
    pipe->add_option("--config", config_path)->required();
    pipe->add_option("--log", log_path, "use this log instead of simulating");
    pipe->add_option("--out", out_path)->required();
    pipe->add_flag("--met-convention", met);

    std::vector<const char*> argv{"forcefield"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sim->parsed()) return cmd_simulate(scenario_path, out_path);
        if (insp->parsed()) return cmd_inspect(log_path, out_path, max_gap);
        if (sync->parsed()) return cmd_sync(log_path, slop, out_path);
        if (fuse_cmd->parsed()) return cmd_fuse(log_path, slop, out_path);
        if (fit_cmd->parsed()) return cmd_fit(fused_path, phenomenon, kernel, budget, seed, out_path);
        if (pred->parsed()) return cmd_predict(pargs);
        if (pipe->parsed()) return cmd_pipeline(config_path, log_path, out_path, met);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const NotPositiveDefinite& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 4;
    } catch (const Error& e) {
        // config, format, empty-input and precondition failures
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    }
    return 2;
}

}  // namespace forcefield
