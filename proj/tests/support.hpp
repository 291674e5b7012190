#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace testsup {

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout and stderr merged
};

// Runs the companion CLI binary with the given argument string and returns
// its exit status plus merged stdout/stderr. `env_prefix` (e.g. "FOO=1") is
// prepended to the shell command for environment-variable tests.
inline CliResult run_cli(const std::string& args,
                         const std::string& env_prefix = "") {
    std::string cmd = (env_prefix.empty() ? "" : env_prefix + " ") +
                      std::string(GGBM_CLI_PATH) + " " + args + " 2>&1";
    CliResult res;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        res.output.append(buf.data(), n);
    int status = ::pclose(pipe);
    if (WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
    return res;
}

// Minimal CSV splitter for the library's own output (no quoting, no escapes).
inline std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    return rows;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

// Per-process scratch directory so parallel ctest invocations don't collide.
inline std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() /
               ("ggbm_unit_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace testsup
