#include "forcefield/kml.hpp"

#include <fstream>
#include <sstream>

#include "forcefield/util.hpp"

namespace forcefield {

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::string kml_text(const MissionLog& log) {
    if (log.pose.empty()) throw EmptyLog("cannot export KML without pose samples");
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<kml xmlns=\"http://www.opengis.net/kml/2.2\">\n";
    out += "  <Document>\n";
    out += "    <name>" + xml_escape(log.mission_id.empty() ? "mission" : log.mission_id) + "</name>\n";
    out += "    <Placemark>\n";
    out += "      <name>trajectory</name>\n";
    out += "      <LineString>\n";
    out += "        <coordinates>\n";
    for (const auto& p : log.pose)
        out += "          " + fmt_double(p.pos.lon) + ',' + fmt_double(p.pos.lat) + '\n';
    out += "        </coordinates>\n";
    out += "      </LineString>\n";
    out += "    </Placemark>\n";
    out += "  </Document>\n";
    out += "</kml>\n";
    return out;
}

void export_kml(const MissionLog& log, const std::filesystem::path& path) {
    std::string text = kml_text(log);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<GeoPoint> parse_kml_track_text(std::string_view xml) {
    size_t open = xml.find("<coordinates>");
    size_t close = xml.find("</coordinates>");
    if (open == std::string_view::npos || close == std::string_view::npos || close < open)
        throw FormatError("no coordinates block in KML");
    std::string_view body = xml.substr(open + 13, close - open - 13);

    std::vector<GeoPoint> track;
    std::istringstream tokens{std::string(body)};
    std::string tok;
    while (tokens >> tok) {
        auto parts = split(tok, ',');
        if (parts.size() < 2) throw FormatError("bad coordinate tuple: " + tok);
        double lon = 0, lat = 0;
        if (!parse_double(parts[0], lon) || !parse_double(parts[1], lat))
            throw FormatError("bad coordinate tuple: " + tok);
        track.push_back({lat, lon});
    }
    return track;
}

std::vector<GeoPoint> read_kml_track(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open KML file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_kml_track_text(buf.str());
}

}  // namespace forcefield
