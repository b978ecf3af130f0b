#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "config.hpp"

namespace stpp::cli {

struct RunFlags {
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
};

void cmd_simulate(const Config& cfg, const RunFlags& flags);
void cmd_intensity(const Config& cfg, const RunFlags& flags);
void cmd_k(const Config& cfg, const RunFlags& flags);
void cmd_test(const Config& cfg, const RunFlags& flags);

/// Parses arguments, runs the subcommand and maps failures to exit codes:
/// 0 success, 1 I/O error, 2 config error, 3 numerical failure.
int run(int argc, char** argv);

}  // namespace stpp::cli
