#include <doctest.h>

#include <cmath>

#include "forcefield/fusion.hpp"
#include "forcefield/simulate.hpp"
#include "forcefield/time_sync.hpp"
#include "forcefield/util.hpp"

using namespace forcefield;

namespace {

ScenarioSpec base_scenario() {
    ScenarioSpec s;
    s.origin = {34.05, -81.1};
    s.field.wind = {VectorField::Kind::Uniform, {2.0, 0.0}};
    s.field.current = {VectorField::Kind::Uniform, {1.0, 0.5}};
    s.field.depth.kind = ScalarField::Kind::Constant;
    s.field.depth.value = 3.0;
    s.trajectory = lawnmower({0, -50, 100, 50}, 25.0, 1.5);
    s.seed = 42;
    return s;
}

}  // namespace

TEST_CASE("truth_at closed forms") {
    FieldSpec f;
    f.wind = {VectorField::Kind::Uniform, {2.0, 0.0}};
    f.current.kind = VectorField::Kind::Vortex;
    f.current.center = {10, 10};
    f.current.strength = 2.0;
    f.current.radius = 5.0;
    f.depth.kind = ScalarField::Kind::Channel;
    f.depth.axis = 'x';
    f.depth.depth_max = 2.0;
    f.depth.width = 50.0;

    Truth t = truth_at(f, {123.0, -40.0});
    CHECK(t.wind.e == 2.0);
    CHECK(t.wind.n == 0.0);

    Truth center = truth_at(f, {10.0, 10.0});
    CHECK(center.current.e == 0.0);  // vortex core is still
    CHECK(center.current.n == 0.0);

    Truth on_axis = truth_at(f, {77.0, 0.0});
    CHECK(on_axis.depth == doctest::Approx(2.0));

    // vortex tangential speed at the core radius equals the strength
    Truth edge = truth_at(f, {15.0, 10.0});
    CHECK(edge.current.norm() == doctest::Approx(2.0));
    CHECK(edge.current.n > 0.0);  // counter-clockwise

    // depth-coupled current grows where the water is shallow
    f.couple_gamma = 1.0;
    f.couple_dref = 2.0;
    Truth shallow = truth_at(f, {15.0, -60.0});
    Truth deep = truth_at(f, {15.0, 10.0});
    CHECK(shallow.depth < deep.depth);
}

TEST_CASE("shear field varies linearly with y") {
    VectorField f;
    f.kind = VectorField::Kind::Shear;
    f.v0 = {1.0, 0.0};
    f.dvdy = {0.1, 0.0};
    CHECK(f.at({50, 0}).e == 1.0);
    CHECK(f.at({0, 10}).e == doctest::Approx(2.0));
    CHECK(f.at({0, -10}).e == doctest::Approx(0.0));
}

TEST_CASE("lawnmower coverage") {
    Trajectory t = lawnmower({0, 0, 100, 100}, 50.0, 1.0);
    REQUIRE(t.waypoints.size() == 6);  // 3 legs
    CHECK(t.waypoints[0].x == 0.0);
    CHECK(t.waypoints[5].x == 100.0);

    Trajectory t10 = lawnmower({0, 0, 100, 100}, 10.0, 1.0);
    CHECK(t10.waypoints.size() == 22);  // 11 legs

    // leg headings alternate 0/180
    for (size_t leg = 0; leg + 1 < t10.waypoints.size(); leg += 2) {
        double dy = t10.waypoints[leg + 1].y - t10.waypoints[leg].y;
        CHECK(std::abs(dy) == 100.0);
        CHECK(dy == ((leg / 2) % 2 == 0 ? 100.0 : -100.0));
    }
}

TEST_CASE("simulate_run rejects degenerate trajectories") {
    ScenarioSpec s = base_scenario();
    s.trajectory.waypoints = {{0, 0}};
    CHECK_THROWS_AS(simulate_run(s), DegenerateTrajectory);
    s.trajectory.waypoints = {{0, 0}, {0, 0}};
    CHECK_THROWS_AS(simulate_run(s), DegenerateTrajectory);
    s.trajectory.waypoints = {{0, 0}, {10, 0}};
    s.trajectory.speed = 0.0;
    CHECK_THROWS_AS(simulate_run(s), DegenerateTrajectory);
}

TEST_CASE("simulate_run is deterministic byte for byte") {
    ScenarioSpec s = base_scenario();
    s.noise = {0.5, 0.1, 0.1, 0.05};
    std::string a = write_log_text(simulate_run(s));
    std::string b = write_log_text(simulate_run(s));
    CHECK(a == b);

    s.seed = 43;
    CHECK(write_log_text(simulate_run(s)) != a);
}

TEST_CASE("simulated logs survive the write/parse round trip field for field") {
    ScenarioSpec s = base_scenario();
    s.noise = {0.2, 0.1, 0.1, 0.05};
    MissionLog log = simulate_run(s);
    MissionLog back = parse_log_text(write_log_text(log));
    CHECK(back.mission_id == log.mission_id);
    REQUIRE(back.pose.size() == log.pose.size());
    REQUIRE(back.wind.size() == log.wind.size());
    REQUIRE(back.current.size() == log.current.size());
    REQUIRE(back.depth.size() == log.depth.size());
    for (size_t i = 0; i < log.pose.size(); ++i) {
        CHECK(back.pose[i].t == log.pose[i].t);
        CHECK(back.pose[i].pos.lat == log.pose[i].pos.lat);
        CHECK(back.pose[i].pos.lon == log.pose[i].pos.lon);
        CHECK(back.pose[i].vel.e == log.pose[i].vel.e);
        CHECK(back.pose[i].vel.n == log.pose[i].vel.n);
        CHECK(back.pose[i].heading == log.pose[i].heading);
    }
    for (size_t i = 0; i < log.wind.size(); ++i) {
        CHECK(back.wind[i].t == log.wind[i].t);
        CHECK(back.wind[i].speed == log.wind[i].speed);
        CHECK(back.wind[i].direction_rel == log.wind[i].direction_rel);
    }
    for (size_t i = 0; i < log.current.size(); ++i) CHECK(back.current[i].f == log.current[i].f);
    for (size_t i = 0; i < log.depth.size(); ++i) CHECK(back.depth[i].depth == log.depth[i].depth);
}

TEST_CASE("cone model: at most two sensors read positive") {
    Rng rng(4);
    for (int i = 0; i < 2000; ++i) {
        double bearing = rng.uniform(0, 360);
        double speed = rng.uniform(0.01, 4.0);
        auto f = cone_readings({speed * std::cos(deg2rad(bearing)), speed * std::sin(deg2rad(bearing))});
        int positive = 0;
        for (double v : f) positive += v > 0.0;
        CHECK(positive <= 2);
        CHECK(positive >= 1);
    }
}

TEST_CASE("still air reads exactly the boat-speed headwind") {
    ScenarioSpec s = base_scenario();
    s.field.wind = {VectorField::Kind::Uniform, {0.0, 0.0}};
    s.trajectory = Trajectory{{{0, 0}, {0, 200}}, 3.0};  // one northbound leg
    MissionLog log = simulate_run(s);
    REQUIRE(!log.wind.empty());
    for (const auto& w : log.wind) {
        CHECK(w.speed == doctest::Approx(3.0).epsilon(1e-12));
        CHECK(w.direction_rel == doctest::Approx(180.0).epsilon(1e-12));
    }
}

TEST_CASE("docked-style cone readings for a flow along sensor 0") {
    // relative flow straight along the bow-starboard sensor axis
    double s = 1.7;
    auto f = cone_readings({s * std::cos(deg2rad(45.0)), s * std::sin(deg2rad(45.0))});
    CHECK(f[0] == doctest::Approx(s).epsilon(1e-12));
    CHECK(f[1] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(f[2] == 0.0);
    CHECK(f[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("zero-noise closure: sync + fusion recover the truth fields") {
    ScenarioSpec s = base_scenario();
    s.field.current = {VectorField::Kind::Uniform,
                       {2.5 * std::sin(deg2rad(30.0)), 2.5 * std::cos(deg2rad(30.0))}};
    MissionLog log = simulate_run(s);
    auto tuples = align(log, 0.25);
    REQUIRE(tuples.size() > 50);
    auto fused = fuse(tuples, log.origin);
    for (const auto& f : fused) {
        Truth t = truth_at(s.field, f.pos);
        CHECK(std::abs(f.wind_world.e - t.wind.e) < 1e-6);
        CHECK(std::abs(f.wind_world.n - t.wind.n) < 1e-6);
        CHECK(std::abs(f.current_world.e - t.current.e) < 1e-6);
        CHECK(std::abs(f.current_world.n - t.current.n) < 1e-6);
    }
}

TEST_CASE("turn blanking leaves no samples near interior corners") {
    ScenarioSpec s = base_scenario();
    Trajectory t = s.trajectory;
    double leg = 0.0;
    std::vector<double> corners;
    for (size_t i = 0; i + 1 < t.waypoints.size(); ++i) {
        double dx = t.waypoints[i + 1].x - t.waypoints[i].x;
        double dy = t.waypoints[i + 1].y - t.waypoints[i].y;
        leg += std::hypot(dx, dy);
        if (i + 2 < t.waypoints.size()) corners.push_back(leg / t.speed);
    }
    MissionLog log = simulate_run(s);
    for (const auto& p : log.pose)
        for (double c : corners) CHECK(std::abs(p.t - c) >= s.turn_blank);
    for (const auto& w : log.wind)
        for (double c : corners) CHECK(std::abs(w.t - c) >= s.turn_blank);
}
