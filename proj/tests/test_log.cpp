#include <doctest.h>

#include <string>

#include "forcefield/kml.hpp"
#include "forcefield/mission_log.hpp"
#include "forcefield/nmea.hpp"
#include "forcefield/util.hpp"
#include "oracles.hpp"

using namespace forcefield;

namespace {

MissionLog tiny_log() {
    MissionLog log;
    log.origin = {34.0, -81.0};
    log.mission_id = "tiny";
    log.pose = {{0.0, {34.0, -81.0}, {1.0, 0.5}, 90.0}, {1.0, {34.0001, -81.0001}, {1.0, 0.5}, 90.0}};
    log.wind = {{0.1, 3.0, 45.0}};
    log.current = {{0.2, {0.5, 0.1, 0.0, 0.2}}};
    log.depth = {{0.3, 5.5}};
    return log;
}

}  // namespace

TEST_CASE("parse_log: one record per stream") {
    std::string text =
        "forcefield-log v1,34,-81\n"
        "pose,0,34,-81,1,0,90\n"
        "wind,0.1,3,45\n"
        "current,0.2,0.5,0.1,0,0.2\n"
        "depth,0.3,5.5\n";
    MissionLog log = parse_log_text(text);
    CHECK(log.pose.size() == 1);
    CHECK(log.wind.size() == 1);
    CHECK(log.current.size() == 1);
    CHECK(log.depth.size() == 1);
    CHECK(log.origin.lat == 34.0);
    CHECK(log.wind[0].speed == 3.0);
    CHECK(log.depth[0].depth == 5.5);
}

TEST_CASE("parse_log: sorts out-of-order streams and drops duplicates") {
    std::string text =
        "forcefield-log v1,34,-81,m1\n"
        "pose,2,34,-81,0,0,0\n"
        "pose,1,34.0001,-81,0,0,0\n"
        "pose,1,34.0002,-81,0,0,0\n";
    ParseStats stats;
    MissionLog log = parse_log_text(text, &stats);
    CHECK(log.mission_id == "m1");
    REQUIRE(log.pose.size() == 2);
    CHECK(log.pose[0].t == 1.0);
    CHECK(log.pose[0].pos.lat == 34.0001);  // first occurrence kept
    CHECK(log.pose[1].t == 2.0);
    CHECK(stats.duplicates == 1);
}

TEST_CASE("parse_log: skips bad records but keeps count") {
    std::string text =
        "forcefield-log v1,34,-81\n"
        "pose,0,34,-81,0,0,0\n"
        "wind,0.1,-3,45\n"          // negative speed
        "depth,0.2,-1\n"            // non-positive depth
        "depth,0.3,2000\n"          // implausible depth
        "current,0.4,1,2,3\n"       // wrong arity
        "bogus,1,2\n"               // unknown tag
        "pose,1,34,-81,0,0,nan\n";  // non-finite
    ParseStats stats;
    MissionLog log = parse_log_text(text, &stats);
    CHECK(log.pose.size() == 1);
    CHECK(log.wind.empty());
    CHECK(log.depth.empty());
    CHECK(stats.skipped == 6);
}

TEST_CASE("parse_log errors") {
    CHECK_THROWS_AS(parse_log_text("not-a-log\n"), FormatError);
    CHECK_THROWS_AS(parse_log_text("forcefield-log v1,999,-81\n"), FormatError);
    CHECK_THROWS_AS(parse_log_text("forcefield-log v1,34,-81\nwind,0.1,3,45\n"), EmptyLog);
}

TEST_CASE("write_log round trip is exact") {
    MissionLog log = tiny_log();
    MissionLog back = parse_log_text(write_log_text(log));
    REQUIRE(back.pose.size() == log.pose.size());
    CHECK(back.mission_id == log.mission_id);
    CHECK(back.pose[0].vel.n == log.pose[0].vel.n);
    CHECK(back.pose[1].pos.lat == log.pose[1].pos.lat);
    CHECK(back.wind[0].direction_rel == log.wind[0].direction_rel);
    CHECK(back.current[0].f == log.current[0].f);
    CHECK(back.depth[0].depth == log.depth[0].depth);
    // serializer is canonical: write(parse(write(L))) == write(L)
    CHECK(write_log_text(back) == write_log_text(log));
}

TEST_CASE("nmea_checksum basics") {
    CHECK(nmea_checksum("") == "00");
    CHECK(nmea_checksum("A") == "41");
    std::string body = "SDDBT,23.6,f,7.2,M,3.9,F";
    CHECK(nmea_checksum(body) == oracle::xor_checksum(body));
    CHECK_THROWS_AS(nmea_checksum("AB$C"), InvalidChar);
    CHECK_THROWS_AS(nmea_checksum("AB\x01"), InvalidChar);
}

TEST_CASE("parse_nmea_depth accepts DBT and DPT") {
    CHECK(parse_nmea_depth(nmea_frame("SDDPT,7.2,0.0")) == 7.2);
    CHECK(parse_nmea_depth(nmea_frame("SDDBT,23.6,f,7.2,M,3.9,F")) == 7.2);
}

TEST_CASE("parse_nmea_depth error paths") {
    std::string good = nmea_frame("SDDPT,7.2,0.0");
    std::string corrupted = good;
    corrupted.back() = corrupted.back() == '0' ? '1' : '0';
    CHECK_THROWS_AS(parse_nmea_depth(corrupted), ChecksumMismatch);
    CHECK_THROWS_AS(parse_nmea_depth(nmea_frame("GPGGA,1,2,3")), UnsupportedSentence);
    CHECK_THROWS_AS(parse_nmea_depth(nmea_frame("SDDPT,,0.0")), MissingDepthField);
    CHECK_THROWS_AS(parse_nmea_depth(nmea_frame("SDDBT,23.6,f")), MissingDepthField);
    CHECK_THROWS_AS(parse_nmea_depth(nmea_frame("SDDPT,0.0,0.0")), NonPositiveDepth);
    CHECK_THROWS_AS(parse_nmea_depth("no dollar"), UnsupportedSentence);
    CHECK_THROWS_AS(parse_nmea_depth("$SDDPT,7.2,0.0"), UnsupportedSentence);
}

TEST_CASE("accepted sentences re-frame to identical text") {
    for (std::string body : {std::string("SDDPT,7.2,0.0"), std::string("SDDBT,23.6,f,7.2,M,3.9,F")}) {
        std::string sentence = nmea_frame(body);
        CHECK(parse_nmea_depth(sentence) == 7.2);
        CHECK(nmea_frame(body) == sentence);
    }
}

TEST_CASE("kml export puts lon before lat") {
    MissionLog log;
    log.origin = {34.0, -81.0};
    log.pose = {{0.0, {34.0, -81.0}, {}, 0.0}};
    std::string kml = kml_text(log);
    CHECK(kml.find("-81,34") != std::string::npos);
    CHECK(kml.find("<LineString>") != std::string::npos);
}

TEST_CASE("kml reader recovers the pose track in order") {
    MissionLog log = tiny_log();
    log.pose.push_back({2.0, {34.0005, -80.9995}, {}, 0.0});
    auto track = parse_kml_track_text(kml_text(log));
    REQUIRE(track.size() == log.pose.size());
    for (size_t i = 0; i < track.size(); ++i) {
        CHECK(track[i].lat == log.pose[i].pos.lat);
        CHECK(track[i].lon == log.pose[i].pos.lon);
    }
}

TEST_CASE("kml export requires poses") {
    MissionLog log;
    log.origin = {34.0, -81.0};
    CHECK_THROWS_AS(kml_text(log), EmptyLog);
}
