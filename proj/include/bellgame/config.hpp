#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bellgame/core.hpp"
#include "bellgame/games.hpp"
#include "bellgame/strategies.hpp"

namespace bellgame::cli {

// Run configuration, read from a flat key = value file with typed
// sections. Example:
//
//     protocol = closed
//     rounds = 100000
//     seed = 42
//     snapshot_stride = 100
//     output = both            # csv | json | both
//     history_mode = summary   # full | summary
//
//     [scientist]
//     kind = forcing_closed
//     setting_policy = uniform # uniform | round_robin
//
//     [nature]
//     kind = quantum           # see below
//     fill_rule = uniform      # uniform | copy
//
// Nature kinds by protocol:
//   closed:     quantum, md_lhv, independent (optional weights = 16 values),
//               deterministic (lambda = e.g. ++--), mixture (p_quantum)
//   locality:   locality_exploit, fixed_lambda (lambda = ...)
//   predictive: iid (weights over the alphabet; [predictive] section sets
//               alphabet and odds)
//
// '#' starts a comment; blank lines are ignored. parse(emit(config))
// reproduces the configuration exactly.

enum class Protocol { predictive, locality, closed };
enum class OutputMode { csv, json, both };

struct ScientistSpec {
    std::string kind;  // defaulted from the protocol when empty
    strategies::SettingChoice setting_policy = strategies::SettingChoice::uniform;

    friend bool operator==(const ScientistSpec&, const ScientistSpec&) = default;
};

struct NatureSpec {
    std::string kind;
    FillRule fill = FillRule::uniform;
    std::vector<double> weights;    // independent law (16) or iid reality law
    std::string lambda = "++++";    // deterministic / fixed_lambda
    double p_quantum = 0.5;         // mixture

    friend bool operator==(const NatureSpec&, const NatureSpec&) = default;
};

struct PredictiveSpec {
    std::uint64_t alphabet = 2;
    std::vector<double> odds;  // empty means uniform

    friend bool operator==(const PredictiveSpec&, const PredictiveSpec&) = default;
};

struct RunConfig {
    Protocol protocol = Protocol::closed;
    std::uint64_t rounds = 0;
    std::uint64_t seed = 0;
    std::uint64_t snapshot_stride = 100;
    OutputMode output = OutputMode::both;
    games::HistoryMode history = games::HistoryMode::summary;
    ScientistSpec scientist;
    NatureSpec nature;
    PredictiveSpec predictive;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws ConfigError with the offending line on malformed input; applies
// protocol-dependent defaults and validates cross-field consistency.
RunConfig parse_config(const std::string& text);
std::string emit_config(const RunConfig& config);

// One override applied to a parsed configuration; `path` is "key" for
// top-level keys or "section.key".
void apply_override(RunConfig& config, const std::string& path, const std::string& value);

// A sweep grid: one axis per line, "path = v1, v2, ...". The sweep runs
// the cartesian product of all axes.
struct ParameterGrid {
    std::vector<std::pair<std::string, std::vector<std::string>>> axes;

    std::size_t point_count() const;
    // overrides for the i-th point, in axis order
    std::vector<std::pair<std::string, std::string>> point(std::size_t i) const;
};

ParameterGrid parse_grid(const std::string& text);

}  // namespace bellgame::cli
