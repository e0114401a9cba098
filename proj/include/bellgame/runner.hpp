#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellgame/config.hpp"

namespace bellgame::cli {

// Exit codes shared by the library entry points and the command-line tool:
//   0 success, 1 verification mismatch, 2 configuration error,
//   3 protocol violation at runtime (the violating round is reported).
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitProtocolViolation = 3;

inline constexpr int kSchemaVersion = 1;

// The fixed CSV header. Columns that do not apply to a protocol (or are
// not defined yet, such as a correlation over an unvisited setting) are
// left empty.
extern const char* const kCsvHeader;

struct SimulateResult {
    int exit_code = kExitOk;
    std::string csv;   // empty unless the output mode includes csv
    std::string json;  // empty unless the output mode includes json
    std::uint64_t violation_round = 0;
    std::string error;
};

// Runs one configured game. Output strings are a pure function of the
// configuration, including the seed.
SimulateResult simulate(const RunConfig& config);

struct SweepResult {
    int exit_code = kExitOk;
    std::string csv;   // one row per (grid point, seed)
    std::string json;  // rows plus per-point aggregates across seeds
    std::string error;
};

// Cartesian sweep over the grid axes, one run per (point, seed). Cells run
// in parallel; failed cells are reported per row and skipped by the
// aggregates.
SweepResult sweep(const RunConfig& base, const ParameterGrid& grid,
                  const std::vector<std::uint64_t>& seeds);

// All table constants, the joint-model witness and the limiting rates, as
// a JSON document.
std::string oracle_report_json();

struct VerifyResult {
    int exit_code = kExitOk;
    std::string detail;
};

// Recomputes the independence capital process and every statistics column
// of a stride-1 closed-game CSV from its raw move columns and checks them
// against the recorded values.
VerifyResult verify_csv(const std::string& csv_text);

}  // namespace bellgame::cli
