#include "forcefield/nmea.hpp"

#include <cctype>

#include "forcefield/util.hpp"

namespace forcefield {

std::string nmea_checksum(std::string_view body) {
    unsigned char acc = 0;
    for (char c : body) {
        unsigned char b = static_cast<unsigned char>(c);
        if (b < 0x20 || b > 0x7e || c == '$' || c == '*')
            throw InvalidChar("sentence body contains invalid character");
        acc ^= b;
    }
    char buf[3];
    std::snprintf(buf, sizeof buf, "%02X", acc);
    return std::string(buf, 2);
}

std::string nmea_frame(std::string_view body) {
    return "$" + std::string(body) + "*" + nmea_checksum(body);
}

double parse_nmea_depth(std::string_view sentence) {
    if (sentence.empty() || sentence.front() != '$')
        throw UnsupportedSentence("sentence does not start with '$'");
    size_t star = sentence.rfind('*');
    if (star == std::string_view::npos || sentence.size() - star - 1 < 2)
        throw UnsupportedSentence("sentence has no checksum field");
    std::string_view body = sentence.substr(1, star - 1);
    std::string_view cs = sentence.substr(star + 1, 2);
    std::string want = nmea_checksum(body);
    if (std::toupper(static_cast<unsigned char>(cs[0])) != want[0] ||
        std::toupper(static_cast<unsigned char>(cs[1])) != want[1])
        throw ChecksumMismatch("checksum mismatch: got " + std::string(cs) + ", computed " + want);

    auto fields = split(body, ',');
    std::string_view address = fields[0];
    if (address.size() < 3) throw UnsupportedSentence("malformed address field");
    std::string_view type = address.substr(address.size() - 3);

    std::string_view depth_field;
    if (type == "DBT") {
        // $--DBT,<feet>,f,<meters>,M,<fathoms>,F
        if (fields.size() < 5 || fields[4] != "M") throw MissingDepthField("DBT meters field missing");
        depth_field = fields[3];
    } else if (type == "DPT") {
        // $--DPT,<meters>,<transducer offset>
        if (fields.size() < 2) throw MissingDepthField("DPT depth field missing");
        depth_field = fields[1];
    } else {
        throw UnsupportedSentence("unsupported sentence type: " + std::string(type));
    }

    double depth = 0.0;
    if (!parse_double(depth_field, depth)) throw MissingDepthField("depth field not a number");
    if (!(depth > 0.0)) throw NonPositiveDepth("depth must be positive");
    return depth;
}

}  // namespace forcefield
