#include "forcefield/mission_log.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "forcefield/util.hpp"

namespace forcefield {

namespace {

constexpr std::string_view kMagic = "forcefield-log v1";

bool parse_fields(const std::vector<std::string_view>& tok, size_t first, size_t count, double* out) {
    if (tok.size() != first + count) return false;
    for (size_t i = 0; i < count; ++i)
        if (!parse_double(tok[first + i], out[i])) return false;
    return true;
}

template <class T>
void sort_dedupe(std::vector<T>& v, ParseStats& stats) {
    std::stable_sort(v.begin(), v.end(), [](const T& a, const T& b) { return a.t < b.t; });
    size_t out = 0;
    for (size_t i = 0; i < v.size(); ++i) {
        if (out > 0 && v[i].t == v[out - 1].t) {
            ++stats.duplicates;
            continue;  // keep first
        }
        v[out++] = v[i];
    }
    v.resize(out);
}

}  // namespace

double MissionLog::start_time() const {
    double t = std::numeric_limits<double>::infinity();
    if (!pose.empty()) t = std::min(t, pose.front().t);
    if (!wind.empty()) t = std::min(t, wind.front().t);
    if (!current.empty()) t = std::min(t, current.front().t);
    if (!depth.empty()) t = std::min(t, depth.front().t);
    return std::isfinite(t) ? t : 0.0;
}

double MissionLog::end_time() const {
    double t = -std::numeric_limits<double>::infinity();
    if (!pose.empty()) t = std::max(t, pose.back().t);
    if (!wind.empty()) t = std::max(t, wind.back().t);
    if (!current.empty()) t = std::max(t, current.back().t);
    if (!depth.empty()) t = std::max(t, depth.back().t);
    return std::isfinite(t) ? t : 0.0;
}

MissionLog parse_log_text(std::string_view text, ParseStats* stats) {
    ParseStats local;
    ParseStats& st = stats ? *stats : local;
    st = ParseStats{};

    MissionLog log;
    size_t pos = 0;
    bool have_header = false;

    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        line = trim(line);
        if (line.empty()) continue;

        auto tok = split(line, ',');
        if (!have_header) {
            if (tok[0] != kMagic || tok.size() < 3 || tok.size() > 4)
                throw FormatError("bad log header: " + std::string(line));
            double lat = 0, lon = 0;
            if (!parse_double(tok[1], lat) || !parse_double(tok[2], lon) || std::abs(lat) > 90.0 ||
                std::abs(lon) > 180.0)
                throw FormatError("bad origin in log header");
            log.origin = {lat, lon};
            if (tok.size() == 4) log.mission_id = std::string(tok[3]);
            have_header = true;
            continue;
        }

        std::string_view tag = tok[0];
        if (tag == "pose") {
            double f[6];
            if (parse_fields(tok, 1, 6, f) && std::abs(f[1]) <= 90.0 && std::abs(f[2]) <= 180.0) {
                log.pose.push_back({f[0], {f[1], f[2]}, {f[3], f[4]}, wrap_deg(f[5])});
                continue;
            }
        } else if (tag == "wind") {
            double f[3];
            if (parse_fields(tok, 1, 3, f) && f[1] >= 0.0) {
                log.wind.push_back({f[0], f[1], wrap_deg(f[2])});
                continue;
            }
        } else if (tag == "current") {
            double f[5];
            if (parse_fields(tok, 1, 5, f) && f[1] >= 0.0 && f[2] >= 0.0 && f[3] >= 0.0 && f[4] >= 0.0) {
                log.current.push_back({f[0], {f[1], f[2], f[3], f[4]}});
                continue;
            }
        } else if (tag == "depth") {
            double f[2];
            // plausibility gate: reject non-positive and absurd depths
            if (parse_fields(tok, 1, 2, f) && f[1] > 0.0 && f[1] < 1000.0) {
                log.depth.push_back({f[0], f[1]});
                continue;
            }
        }
        ++st.skipped;
    }

    if (!have_header) throw FormatError("missing log header");
    sort_dedupe(log.pose, st);
    sort_dedupe(log.wind, st);
    sort_dedupe(log.current, st);
    sort_dedupe(log.depth, st);
    if (log.pose.empty()) throw EmptyLog("log has no pose samples");
    if (st.skipped > 0)
        log_warn("parse_log: skipped " + std::to_string(st.skipped) + " unparseable record(s)");
    return log;
}

MissionLog parse_log(const std::filesystem::path& path, ParseStats* stats) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open log file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_log_text(buf.str(), stats);
}

std::string write_log_text(const MissionLog& log) {
    std::string out;
    out += kMagic;
    out += ',' + fmt_double(log.origin.lat) + ',' + fmt_double(log.origin.lon);
    if (!log.mission_id.empty()) out += ',' + log.mission_id;
    out += '\n';

    // interleave streams by timestamp; ties resolve pose, wind, current, depth
    struct Rec {
        double t;
        int rank;
        std::string line;
    };
    std::vector<Rec> recs;
    recs.reserve(log.pose.size() + log.wind.size() + log.current.size() + log.depth.size());
    for (const auto& p : log.pose)
        recs.push_back({p.t, 0,
                        "pose," + fmt_double(p.t) + ',' + fmt_double(p.pos.lat) + ',' +
                            fmt_double(p.pos.lon) + ',' + fmt_double(p.vel.e) + ',' +
                            fmt_double(p.vel.n) + ',' + fmt_double(p.heading)});
    for (const auto& w : log.wind)
        recs.push_back({w.t, 1,
                        "wind," + fmt_double(w.t) + ',' + fmt_double(w.speed) + ',' +
                            fmt_double(w.direction_rel)});
    for (const auto& c : log.current)
        recs.push_back({c.t, 2,
                        "current," + fmt_double(c.t) + ',' + fmt_double(c.f[0]) + ',' +
                            fmt_double(c.f[1]) + ',' + fmt_double(c.f[2]) + ',' + fmt_double(c.f[3])});
    for (const auto& d : log.depth)
        recs.push_back({d.t, 3, "depth," + fmt_double(d.t) + ',' + fmt_double(d.depth)});

    std::stable_sort(recs.begin(), recs.end(), [](const Rec& a, const Rec& b) {
        if (a.t != b.t) return a.t < b.t;
        return a.rank < b.rank;
    });
    for (const auto& r : recs) {
        out += r.line;
        out += '\n';
    }
    return out;
}

void write_log(const MissionLog& log, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << write_log_text(log);
    if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace forcefield
