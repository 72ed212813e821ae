#pragma once

// Shared plumbing: shortest round-trip number formatting, strict parsing,
// string splitting, a self-contained seeded RNG, and stderr logging gated
// by the FORCEFIELD_LOG_LEVEL environment variable.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace forcefield {

/// Shortest decimal representation that parses back to the same double.
std::string fmt_double(double v);

/// Strict full-token parse; rejects trailing junk, NaN and infinities.
bool parse_double(std::string_view s, double& out);
bool parse_u64(std::string_view s, uint64_t& out);

std::vector<std::string_view> split(std::string_view s, char sep);
std::string_view trim(std::string_view s);

uint64_t splitmix64(uint64_t x);

/// mt19937_64 with explicit uniform/Box-Muller mappings, so generated
/// streams do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    uint64_t next_u64() { return gen_(); }
    double uniform();  // [0, 1)
    double uniform(double a, double b);
    double normal(double sigma);

private:
    std::mt19937_64 gen_;
};

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Quiet = 4 };

LogLevel log_level();
void log_msg(LogLevel lvl, const std::string& msg);
inline void log_debug(const std::string& m) { log_msg(LogLevel::Debug, m); }
inline void log_info(const std::string& m) { log_msg(LogLevel::Info, m); }
inline void log_warn(const std::string& m) { log_msg(LogLevel::Warn, m); }

}  // namespace forcefield
