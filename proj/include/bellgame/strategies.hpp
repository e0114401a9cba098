#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bellgame/games.hpp"
#include "bellgame/prng.hpp"

namespace bellgame::strategies {

// Concrete Scientist and Nature policies. Every stochastic policy owns a
// seeded stream (see prng.hpp for the stream-splitting rule) and is a pure
// function of (observed history, own state, stream), so a run replays
// bit-identically from its seed.

enum class SettingChoice { uniform, round_robin };

// ---------------------------------------------------------------------------
// Scientists
// ---------------------------------------------------------------------------

// The forcing bettor of the loopholes-closed game: an add-half (KT) mixture
// over the four outcome pairs, kept separately for each joint setting and
// fed only with rounds played under that setting. Its capital per context
// tracks T(u) * D(empirical pair law || table row) up to a (3/2) log T(u)
// regret, so it diverges unless the conditional frequencies converge to
// the table.
class ForcingClosedScientist final : public games::ClosedScientistPolicy {
public:
    explicit ForcingClosedScientist(std::uint64_t stream_seed,
                                    SettingChoice choice = SettingChoice::uniform);

    games::ClosedScientistMove choose() override;
    void observe(const games::ClosedRoundRecord& record) override;

    // counts restricted to rounds with the given setting, by pair index
    const std::array<std::uint64_t, 4>& context_counts(const SettingPair& u) const {
        return counts_[u.index()];
    }
    std::uint64_t context_total(const SettingPair& u) const { return totals_[u.index()]; }

private:
    Xoshiro256ss rng_;
    SettingChoice choice_;
    std::uint64_t round_robin_next_ = 0;
    std::array<std::array<std::uint64_t, 4>, 4> counts_{};  // [setting][pair]
    std::array<std::uint64_t, 4> totals_{};
};

// A-wing bettor of the locality game: per-setting add-half bets on A's own
// outcome against the marginal odds 1/2.
class TheoremTwoScientistA final : public games::ScientistAPolicy {
public:
    explicit TheoremTwoScientistA(std::uint64_t stream_seed,
                                  SettingChoice choice = SettingChoice::uniform);

    games::LocalityAMove choose() override;
    void observe(const games::LocalityRoundRecord& record) override;

private:
    Xoshiro256ss rng_;
    SettingChoice choice_;
    std::uint64_t round_robin_next_ = 0;
    std::array<std::array<std::uint64_t, 2>, 2> counts_{};  // [s-1][outcome]
    std::array<std::uint64_t, 2> totals_{};
};

// B-wing bettor of the locality game. Bets are add-half mixtures on B's
// outcome, kept per context (a, s, t) and played against the conditional
// odds. The setting t is chosen by a greedy balancing rule: for the current
// (a, s), pick the t whose post-round frequency of a within context (s, t)
// lands closest to the post-round frequency of a among all rounds with
// setting s, ties toward t = 3. This keeps the context frequencies glued to
// the per-setting ones, which is what makes B's capital a valid test of the
// conditional odds.
class TheoremTwoScientistB final : public games::ScientistBPolicy {
public:
    TheoremTwoScientistB() = default;

    games::LocalityBMove choose(const games::LocalityAMove& a_move, Outcome omega_a) override;
    void observe(const games::LocalityRoundRecord& record) override;

    // max over (a, s, t) of |freq(a | s) - freq(a | s, t)|, the balancing
    // target; contexts not yet visited are skipped
    double balancing_discrepancy() const;

private:
    // B-outcome counts per (a, s, t)
    std::uint64_t b_counts_[2][2][2][2] = {};  // [a][s-1][t-3][b]
    std::uint64_t b_totals_[2][2][2] = {};
    // balancing tallies
    std::uint64_t rounds_with_s_[2] = {};
    std::uint64_t rounds_with_as_[2][2] = {};   // [a][s-1]
    std::uint64_t rounds_with_st_[2][2] = {};   // [s-1][t-3]
    std::uint64_t rounds_with_ast_[2][2][2] = {};
};

// ---------------------------------------------------------------------------
// Natures (closed game)
// ---------------------------------------------------------------------------

// Samples the observed outcome pair from the table row of the announced
// setting, then fills the two unobserved coordinates by the fill rule
// (uniform coins, or copies of the same wing's observed outcome). The
// announced quadruple necessarily depends on the setting, which is exactly
// what the W process exists to detect. Serves as both the "quantum" sampler
// and the canonical measurement-dependent hidden-variable model.
class QuantumNature final : public games::ClosedNaturePolicy {
public:
    QuantumNature(std::uint64_t stream_seed, FillRule fill = FillRule::uniform,
                  const ChshTable& table = canonical_chsh_table());

    HiddenVariable respond(const games::ClosedScientistMove& announced) override;

private:
    Xoshiro256ss rng_;
    FillRule fill_;
    const ChshTable* table_;
};

// Draws the quadruple i.i.d. from a fixed law on the 16 quadruples. Derives
// from the setting-blind base, so the announced setting is unreachable from
// its draw by construction.
class IndependentLhvNature final : public games::SettingBlindNaturePolicy {
public:
    explicit IndependentLhvNature(std::uint64_t stream_seed);
    IndependentLhvNature(std::uint64_t stream_seed, const std::array<double, 16>& law);

    HiddenVariable draw() override;
    const std::array<double, 16>& law() const { return law_; }

private:
    Xoshiro256ss rng_;
    std::array<double, 16> law_{};
};

// The same quadruple every round.
class DeterministicNature final : public games::SettingBlindNaturePolicy {
public:
    explicit DeterministicNature(const HiddenVariable& lambda) : lambda_(lambda) {}
    HiddenVariable draw() override { return lambda_; }

private:
    HiddenVariable lambda_;
};

// Per round: a coin decides between the quantum sampler and the uniform
// independent one (coin first, then the branch's draws).
class MixtureNature final : public games::ClosedNaturePolicy {
public:
    MixtureNature(std::uint64_t stream_seed, double p_quantum, FillRule fill = FillRule::uniform,
                  const ChshTable& table = canonical_chsh_table());

    HiddenVariable respond(const games::ClosedScientistMove& announced) override;

private:
    Xoshiro256ss rng_;
    double p_quantum_;
    FillRule fill_;
    const ChshTable* table_;
};

// Scripted moves, for replays and adversarial fixtures. Throws
// ReplayExhausted past the end of the script.
class ReplayNature final : public games::ClosedNaturePolicy {
public:
    explicit ReplayNature(std::vector<HiddenVariable> moves) : moves_(std::move(moves)) {}

    HiddenVariable respond(const games::ClosedScientistMove&) override;

private:
    std::vector<HiddenVariable> moves_;
    std::size_t next_ = 0;
};

// ---------------------------------------------------------------------------
// Natures (locality game)
// ---------------------------------------------------------------------------

// Nature A playing the marginal odds: a fair coin per round.
class UniformNatureA final : public games::NatureAPolicy {
public:
    explicit UniformNatureA(std::uint64_t stream_seed) : rng_(stream_seed) {}
    Outcome respond(const games::LocalityAMove&) override;

private:
    Xoshiro256ss rng_;
};

// Nature B exploiting the locality loophole: after seeing (s, omega_a, t)
// it samples omega_b from the conditional odds and assembles a quadruple
// inside the required preimage, remaining coordinates uniform. Reproduces
// the full table without any shared hidden variable ahead of time.
class LocalityExploitNatureB final : public games::NatureBPolicy {
public:
    explicit LocalityExploitNatureB(std::uint64_t stream_seed,
                                    const ChshTable& table = canonical_chsh_table())
        : rng_(stream_seed), table_(&table) {}

    HiddenVariable respond(const games::LocalityAMove& a_move, Outcome omega_a,
                           const games::LocalityBMove& b_move) override;

private:
    Xoshiro256ss rng_;
    const ChshTable* table_;
};

// Nature B that ignores the preimage constraint and always answers with a
// fixed quadruple; trips ConsistencyViolation as soon as A's outcome
// disagrees. Error-path fixture.
class FixedLambdaNatureB final : public games::NatureBPolicy {
public:
    explicit FixedLambdaNatureB(const HiddenVariable& lambda) : lambda_(lambda) {}

    HiddenVariable respond(const games::LocalityAMove&, Outcome,
                           const games::LocalityBMove&) override {
        return lambda_;
    }

private:
    HiddenVariable lambda_;
};

}  // namespace bellgame::strategies
