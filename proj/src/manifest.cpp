#include "hwepi/manifest.hpp"

#include <openssl/evp.h>

#include <fstream>
#include <iterator>
#include <json.hpp>

#include "hwepi/errors.hpp"

namespace hwepi {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 15]);
    }
    return out;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return sha256_hex(bytes);
}

void write_manifest(const ExperimentManifest& m, const std::filesystem::path& path) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["args"] = m.args;
    j["config"] = m.config;
    j["seed"] = m.seed;
    j["out_flag"] = m.out_flag;
    j["outputs"] = nlohmann::json::array();
    for (const auto& o : m.outputs) j["outputs"].push_back({{"file", o.file}, {"sha256", o.sha256}});
    j["wall_seconds"] = m.wall_seconds;
    j["threads"] = m.threads;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

ExperimentManifest read_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read manifest " + path.string());
    try {
        const auto j = nlohmann::json::parse(in);
        ExperimentManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.args = j.at("args").get<std::vector<std::string>>();
        m.config = j.at("config").get<std::string>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.out_flag = j.at("out_flag").get<std::string>();
        for (const auto& o : j.at("outputs"))
            m.outputs.push_back({o.at("file").get<std::string>(), o.at("sha256").get<std::string>()});
        m.wall_seconds = j.value("wall_seconds", 0.0);
        m.threads = j.value("threads", 1);
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("malformed manifest " + path.string() + ": " + e.what());
    }
}

}  // namespace hwepi
