#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace vinsp::cli {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

/// Records what a run read and wrote. Written last, as
/// `<output_dir>/manifest_<command>.json`.
class Manifest {
public:
    Manifest(std::string command, nlohmann::json config, std::string config_hash, std::uint64_t seed);

    void add_input(const std::string& role, const std::filesystem::path& path);
    /// `path` is relative to the output directory.
    void add_artifact(const std::filesystem::path& output_dir, const std::string& name);
    void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

    std::filesystem::path write(const std::filesystem::path& output_dir) const;

private:
    std::string command_;
    nlohmann::json config_;
    std::string config_hash_;
    std::uint64_t seed_;
    nlohmann::json inputs_ = nlohmann::json::array();
    nlohmann::json artifacts_ = nlohmann::json::array();
    nlohmann::json extra_ = nlohmann::json::object();
};

}  // namespace vinsp::cli
