#pragma once

// INI-style configuration: [section] headers, key = value lines, '#' or ';'
// comments. Carries the scenario description plus the GP and grid settings
// used by the pipeline.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "forcefield/gp.hpp"
#include "forcefield/simulate.hpp"

namespace forcefield {

struct ConfigError : Error {
    using Error::Error;
};

class Ini {
public:
    static Ini parse_text(std::string_view text);
    static Ini parse_file(const std::filesystem::path& path);

    bool has(const std::string& section, const std::string& key) const;
    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    uint64_t get_u64(const std::string& section, const std::string& key, uint64_t fallback) const;

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Build a ScenarioSpec from the [scenario] section.
ScenarioSpec scenario_from_ini(const Ini& ini);

struct GpConfig {
    KernelKind kernel = KernelKind::Matern32;
    int budget = 150;
    uint64_t seed = 1;
    double slop = 0.25;  // half the anemometer period
};

struct GridConfig {
    double resolution = 2.0;
    double margin = 5.0;
};

GpConfig gp_from_ini(const Ini& ini);
GridConfig grid_from_ini(const Ini& ini);

}  // namespace forcefield
