#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bellgame {

// Protocol violations: a player submitted a move the game rules forbid.
// The engine records the 1-based round at which the violation occurred
// (0 when the violation happened outside a round).
class GameError : public std::runtime_error {
public:
    explicit GameError(const std::string& what, std::uint64_t round = 0)
        : std::runtime_error(what), round_(round) {}
    std::uint64_t round() const noexcept { return round_; }
    void set_round(std::uint64_t r) noexcept { round_ = r; }

private:
    std::uint64_t round_ = 0;
};

// Nature B returned a hidden variable outside the preimage of the observed
// outcome on A's wing.
class ConsistencyViolation : public GameError {
    using GameError::GameError;
};

// A setting outside {1,2} x {3,4} (or a projection index outside 1..4).
class InvalidSetting : public GameError {
    using GameError::GameError;
};

// A conditional statistic was requested for a setting pair that has not
// occurred yet.
class EmptyContext : public GameError {
    using GameError::GameError;
};

// A scripted (replay) policy ran out of recorded moves.
class ReplayExhausted : public GameError {
    using GameError::GameError;
};

// A symbol stream ended before the requested number of rounds.
class StreamExhausted : public GameError {
    using GameError::GameError;
};

// Malformed or inconsistent run configuration.
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace bellgame
