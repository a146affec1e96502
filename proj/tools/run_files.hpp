#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <string_view>

namespace divetrack::cli {

std::string sha256_hex(std::string_view bytes);

/// Write via a sibling temp file and rename, so readers never see a partial file.
void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Per-command audit record. Everything except the "run" key is a pure function of the
/// inputs and configuration; "run" holds the wall-clock timestamp and the job count.
class Manifest {
public:
    Manifest(std::string command, nlohmann::json params);

    void add_input(const std::filesystem::path& path);
    void add_input(const std::string& label, std::string_view bytes);
    /// Records `name` (relative to the output directory) and writes it atomically.
    void write_output(const std::filesystem::path& out_dir, const std::string& name, std::string_view content);
    void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }

    void save(const std::filesystem::path& out_dir, const std::string& name, int jobs) const;

private:
    std::string command_;
    nlohmann::json params_;
    nlohmann::json inputs_ = nlohmann::json::array();
    nlohmann::json outputs_ = nlohmann::json::array();
    nlohmann::json extra_ = nlohmann::json::object();
};

}  // namespace divetrack::cli
