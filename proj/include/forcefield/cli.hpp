#pragma once

// Command-line pipeline driver. Kept out of tools/ so tests can invoke
// subcommands in-process.
//
// Exit codes: 0 success, 1 quality-gate failure, 2 usage or config error,
// 3 I/O error, 4 numeric failure.

#include <filesystem>
#include <string>
#include <vector>

#include "forcefield/fusion.hpp"

namespace forcefield {

/// args excludes the program name, e.g. {"simulate", "--scenario", ...}.
int run_cli(const std::vector<std::string>& args);

struct FusedFile {
    GeoPoint origin;
    std::vector<FusedSample> samples;
};

std::string fused_csv_text(const GeoPoint& origin, std::span<const FusedSample> samples);
FusedFile read_fused_csv(const std::filesystem::path& path);

}  // namespace forcefield
