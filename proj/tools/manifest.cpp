#include "manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "vinsp/error.hpp"

namespace vinsp::cli {

namespace {

class Sha256 {
public:
    Sha256() : ctx_(EVP_MD_CTX_new()) {
        if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1) throw io_error("SHA-256 unavailable");
    }
    ~Sha256() { EVP_MD_CTX_free(ctx_); }
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }
    std::string hex() {
        std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
        unsigned int len = 0;
        EVP_DigestFinal_ex(ctx_, md.data(), &len);
        std::string out;
        for (unsigned i = 0; i < len; ++i) out += fmt::format("{:02x}", md[i]);
        return out;
    }

private:
    EVP_MD_CTX* ctx_;
};

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
    Sha256 h;
    h.update(bytes.data(), bytes.size());
    return h.hex();
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error(fmt::format("cannot open '{}'", path.string()));
    Sha256 h;
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    return h.hex();
}

Manifest::Manifest(std::string command, nlohmann::json config, std::string config_hash, std::uint64_t seed)
    : command_(std::move(command)), config_(std::move(config)), config_hash_(std::move(config_hash)), seed_(seed) {}

void Manifest::add_input(const std::string& role, const std::filesystem::path& path) {
    inputs_.push_back({{"role", role},
                       {"path", path.string()},
                       {"bytes", std::filesystem::file_size(path)},
                       {"sha256", sha256_file(path)}});
}

void Manifest::add_artifact(const std::filesystem::path& output_dir, const std::string& name) {
    const auto path = output_dir / name;
    artifacts_.push_back({{"path", name}, {"bytes", std::filesystem::file_size(path)}, {"sha256", sha256_file(path)}});
}

std::filesystem::path Manifest::write(const std::filesystem::path& output_dir) const {
    nlohmann::json j{
        {"command", command_},
        {"config", config_},
        {"config_hash", config_hash_},
        {"seed", seed_},
        {"inputs", inputs_},
        {"artifacts", artifacts_},
        {"versions",
         {{"vinsp", VINSP_VERSION},
          {"fmt", FMT_VERSION},
          {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                        NLOHMANN_JSON_VERSION_PATCH)}}},
        {"created_at", utc_now()},
    };
    for (const auto& [k, v] : extra_.items()) j[k] = v;
    const auto path = output_dir / fmt::format("manifest_{}.json", command_);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error(fmt::format("cannot write '{}'", path.string()));
    out << j.dump(2) << '\n';
    if (!out) throw io_error(fmt::format("write failed for '{}'", path.string()));
    return path;
}

}  // namespace vinsp::cli
