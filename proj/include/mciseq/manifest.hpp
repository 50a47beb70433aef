#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace mciseq {

inline constexpr const char* kToolVersion = "0.1.0";

// Traceability record emitted with every CLI run: the command, its full
// config, the master seed, content hashes of all inputs, and the artifact
// paths. Deliberately no timestamps so re-runs are byte-identical.
struct RunManifest {
    std::string command;
    std::map<std::string, std::string> config;
    std::uint64_t seed = 0;
    std::map<std::string, std::string> input_hashes;  // path -> fnv1a-64 hex
    std::vector<std::string> artifacts;
    std::string version = kToolVersion;

    void add_input(const std::filesystem::path& path);
    void add_artifact(const std::filesystem::path& path) { artifacts.push_back(path.string()); }
    void write(const std::filesystem::path& path) const;
};

std::string hash_file_hex(const std::filesystem::path& path);

}  // namespace mciseq
