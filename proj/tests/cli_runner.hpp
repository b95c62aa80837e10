#pragma once

// Runs the covlab executable through the shell and captures its streams.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef COVLAB_BIN
#error "COVLAB_BIN must point at the covlab executable"
#endif

namespace clitest {

struct Run {
    int exit_code = -1;
    std::string out;
    std::string err;
};

inline std::filesystem::path scratch_dir() {
    const auto dir = std::filesystem::temp_directory_path() / ("covlab_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::filesystem::path write_file(const std::string& name, const std::string& text) {
    const auto p = scratch_dir() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

inline Run run(const std::string& args) {
    const auto dir = scratch_dir();
    const auto out = dir / "stdout";
    const auto err = dir / "stderr";
    const std::string cmd = std::string("\"") + COVLAB_BIN + "\" " + args + " >\"" + out.string() +
                            "\" 2>\"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Run r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

}  // namespace clitest
