#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlop/counterexample.hpp"

namespace nlop {

// Exit codes: 0 pass, 1 usage/config error, 2 assertion failure, 3 accuracy
// (quadrature tolerance unreachable).
inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitAssert = 2;
inline constexpr int kExitAccuracy = 3;

struct RunConfig {
    std::string command = "constants";
    KernelParams params{};
    QuadratureSpec spec{};
    std::vector<int> N_ladder{16, 64, 256, 1024};
    double p = 0.0; // abp-check exponent; 0 = p0 + 0.3
    std::string output_path = "nlop_report";
    std::string format = "csv";
    uint64_t seed = 12345;
};

// Lossless JSON round trip for configs.
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

// Executes the named suite, writes report files, prints a summary table to
// stdout; returns the exit code.
int run(const RunConfig& cfg);

} // namespace nlop
