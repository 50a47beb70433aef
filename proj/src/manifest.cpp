#include "mciseq/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace mciseq {

std::string hash_file_hex(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot hash missing file: " + path.string());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    char buf[1 << 16];
    while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
        const std::streamsize n = is.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ULL;
        }
        if (!is) break;
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

void RunManifest::add_input(const std::filesystem::path& path) {
    input_hashes[path.string()] = hash_file_hex(path);
}

void RunManifest::write(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["inputs"] = input_hashes;
    j["artifacts"] = artifacts;
    j["version"] = version;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
    os << j.dump(2) << '\n';
}

}  // namespace mciseq
