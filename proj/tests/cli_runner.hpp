#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#ifndef DIVETRACK_CLI_PATH
#error "DIVETRACK_CLI_PATH must name the divetrack executable"
#endif

namespace clitest {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
}

/// Run the CLI with `args` (already shell-quoted where needed), capturing both streams.
inline RunResult run(const fs::path& scratch, const std::string& args) {
    const auto out_file = scratch / "stdout.txt";
    const auto err_file = scratch / "stderr.txt";
    const std::string cmd = std::string("\"") + DIVETRACK_CLI_PATH + "\" " + args + " >\"" + out_file.string() +
                            "\" 2>\"" + err_file.string() + "\"";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

/// Fresh scratch directory under the system temp dir.
inline fs::path scratch_dir(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("divetrack_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

}  // namespace clitest
