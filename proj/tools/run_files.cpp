#include "run_files.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "divetrack/divetrack.hpp"
#include "divetrack/io/text.hpp"

namespace divetrack::cli {

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xF];
    }
    return out;
}

void write_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::filesystem::filesystem_error("cannot write", tmp, std::make_error_code(std::errc::io_error));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw std::filesystem::filesystem_error("write failed", tmp, std::make_error_code(std::errc::io_error));
    }
    std::filesystem::rename(tmp, path);
}

Manifest::Manifest(std::string command, nlohmann::json params)
    : command_(std::move(command)), params_(std::move(params)) {}

void Manifest::add_input(const std::filesystem::path& path) {
    add_input(path.generic_string(), io::read_file(path.string()));
}

void Manifest::add_input(const std::string& label, std::string_view bytes) {
    inputs_.push_back({{"path", label}, {"sha256", sha256_hex(bytes)}, {"bytes", bytes.size()}});
}

void Manifest::write_output(const std::filesystem::path& out_dir, const std::string& name, std::string_view content) {
    write_atomic(out_dir / name, content);
    outputs_.push_back({{"path", name}, {"sha256", sha256_hex(content)}, {"bytes", content.size()}});
}

void Manifest::save(const std::filesystem::path& out_dir, const std::string& name, int jobs) const {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);

    nlohmann::json doc = {{"tool", "divetrack"},
                          {"version", DIVETRACK_VERSION},
                          {"command", command_},
                          {"params", params_},
                          {"inputs", inputs_},
                          {"outputs", outputs_},
                          {"run", {{"timestamp", stamp}, {"jobs", jobs}}}};
    for (const auto& [k, v] : extra_.items()) doc[k] = v;
    write_atomic(out_dir / name, doc.dump(2) + "\n");
}

}  // namespace divetrack::cli
