#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace hwepi {

struct OutputHash {
    std::string file;    ///< path relative to the output location
    std::string sha256;  ///< lowercase hex digest of the file bytes
};

/// Everything needed to rerun a subcommand and check its outputs byte for byte.
struct ExperimentManifest {
    std::string subcommand;
    std::vector<std::string> args;  ///< flags other than config, outputs and threads
    std::string config;             ///< config snapshot in canonical text form
    std::uint64_t seed = 0;
    std::string out_flag;           ///< "--out" or "--out-dir"
    std::vector<OutputHash> outputs;
    double wall_seconds = 0.0;
    int threads = 1;
};

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

void write_manifest(const ExperimentManifest& m, const std::filesystem::path& path);
ExperimentManifest read_manifest(const std::filesystem::path& path);

}  // namespace hwepi
