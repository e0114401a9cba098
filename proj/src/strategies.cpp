#include "bellgame/strategies.hpp"

#include <cmath>

namespace bellgame::strategies {

namespace {

gtp::BettingDistribution add_half_bet(const std::array<std::uint64_t, 4>& counts,
                                      std::uint64_t total) {
    const double denom = static_cast<double>(total) + 2.0;
    std::vector<double> w(4);
    for (std::size_t i = 0; i < 4; ++i) w[i] = (static_cast<double>(counts[i]) + 0.5) / denom;
    return gtp::BettingDistribution(std::move(w));
}

gtp::BettingDistribution add_half_bet(const std::array<std::uint64_t, 2>& counts,
                                      std::uint64_t total) {
    const double denom = static_cast<double>(total) + 1.0;
    return gtp::BettingDistribution({(static_cast<double>(counts[0]) + 0.5) / denom,
                                     (static_cast<double>(counts[1]) + 0.5) / denom});
}

Outcome draw_outcome(Xoshiro256ss& rng, double p_plus) {
    return rng.uniform01() < p_plus ? Outcome::plus : Outcome::minus;
}

// Draw the observed pair from the table row of u, then fill the two
// unobserved coordinates (A-side coin before B-side for the uniform rule).
HiddenVariable sample_table_quadruple(Xoshiro256ss& rng, const ChshTable& table,
                                      const SettingPair& u, FillRule fill) {
    const OutcomePair pair = OutcomePair::from_index(rng.sample(table.row(u)));
    std::array<Outcome, 4> quad{};
    quad[static_cast<std::size_t>(u.a() - 1)] = pair.a;
    quad[static_cast<std::size_t>(u.b() - 1)] = pair.b;
    const std::size_t other_a = static_cast<std::size_t>(u.a() == 1 ? 1 : 0);
    const std::size_t other_b = static_cast<std::size_t>(u.b() == 3 ? 3 : 2);
    if (fill == FillRule::copy_partner) {
        quad[other_a] = pair.a;
        quad[other_b] = pair.b;
    } else {
        quad[other_a] = draw_outcome(rng, 0.5);
        quad[other_b] = draw_outcome(rng, 0.5);
    }
    return HiddenVariable(quad[0], quad[1], quad[2], quad[3]);
}

}  // namespace

// ---------------------------------------------------------------------------
// ForcingClosedScientist
// ---------------------------------------------------------------------------

ForcingClosedScientist::ForcingClosedScientist(std::uint64_t stream_seed, SettingChoice choice)
    : rng_(stream_seed), choice_(choice) {}

games::ClosedScientistMove ForcingClosedScientist::choose() {
    std::size_t u_index;
    if (choice_ == SettingChoice::uniform) {
        u_index = static_cast<std::size_t>(rng_.uniform_int(4));
    } else {
        u_index = static_cast<std::size_t>(round_robin_next_ % 4);
        ++round_robin_next_;
    }
    return games::ClosedScientistMove{
        {add_half_bet(counts_[0], totals_[0]), add_half_bet(counts_[1], totals_[1]),
         add_half_bet(counts_[2], totals_[2]), add_half_bet(counts_[3], totals_[3])},
        SettingPair::from_index(u_index)};
}

void ForcingClosedScientist::observe(const games::ClosedRoundRecord& record) {
    const std::size_t u = record.setting.index();
    ++counts_[u][OutcomePair{record.omega_a, record.omega_b}.index()];
    ++totals_[u];
}

// ---------------------------------------------------------------------------
// TheoremTwoScientistA
// ---------------------------------------------------------------------------

TheoremTwoScientistA::TheoremTwoScientistA(std::uint64_t stream_seed, SettingChoice choice)
    : rng_(stream_seed), choice_(choice) {}

games::LocalityAMove TheoremTwoScientistA::choose() {
    int s;
    if (choice_ == SettingChoice::uniform) {
        s = static_cast<int>(rng_.uniform_int(2)) + 1;
    } else {
        s = static_cast<int>(round_robin_next_ % 2) + 1;
        ++round_robin_next_;
    }
    return games::LocalityAMove{
        {add_half_bet(counts_[0], totals_[0]), add_half_bet(counts_[1], totals_[1])}, s};
}

void TheoremTwoScientistA::observe(const games::LocalityRoundRecord& record) {
    const std::size_t s = static_cast<std::size_t>(record.s - 1);
    ++counts_[s][outcome_index(record.omega_a)];
    ++totals_[s];
}

// ---------------------------------------------------------------------------
// TheoremTwoScientistB
// ---------------------------------------------------------------------------

games::LocalityBMove TheoremTwoScientistB::choose(const games::LocalityAMove& a_move,
                                                  Outcome omega_a) {
    const std::size_t s = static_cast<std::size_t>(a_move.setting - 1);
    const std::size_t a = outcome_index(omega_a);

    std::array<gtp::BettingDistribution, 2> bets = {
        add_half_bet(std::array<std::uint64_t, 2>{b_counts_[a][s][0][0], b_counts_[a][s][0][1]},
                     b_totals_[a][s][0]),
        add_half_bet(std::array<std::uint64_t, 2>{b_counts_[a][s][1][0], b_counts_[a][s][1][1]},
                     b_totals_[a][s][1])};

    // One-step balancing: the frequency of a among setting-s rounds after
    // this round is fixed; route the round to the context whose frequency
    // it pulls closest to that target.
    const double target = (static_cast<double>(rounds_with_as_[a][s]) + 1.0) /
                          (static_cast<double>(rounds_with_s_[s]) + 1.0);
    double best = 0.0;
    int t = 3;
    for (int cand = 3; cand <= 4; ++cand) {
        const std::size_t ti = static_cast<std::size_t>(cand - 3);
        const double freq = (static_cast<double>(rounds_with_ast_[a][s][ti]) + 1.0) /
                            (static_cast<double>(rounds_with_st_[s][ti]) + 1.0);
        const double d = std::abs(target - freq);
        if (cand == 3 || d < best) {
            best = d;
            t = cand;
        }
    }
    return games::LocalityBMove{std::move(bets), t};
}

void TheoremTwoScientistB::observe(const games::LocalityRoundRecord& record) {
    const std::size_t a = outcome_index(record.omega_a);
    const std::size_t s = static_cast<std::size_t>(record.s - 1);
    const std::size_t t = static_cast<std::size_t>(record.t - 3);
    ++b_counts_[a][s][t][outcome_index(record.omega_b)];
    ++b_totals_[a][s][t];
    ++rounds_with_s_[s];
    ++rounds_with_as_[a][s];
    ++rounds_with_st_[s][t];
    ++rounds_with_ast_[a][s][t];
}

double TheoremTwoScientistB::balancing_discrepancy() const {
    double worst = 0.0;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t s = 0; s < 2; ++s)
            for (std::size_t t = 0; t < 2; ++t) {
                if (rounds_with_s_[s] == 0 || rounds_with_st_[s][t] == 0) continue;
                const double lhs = static_cast<double>(rounds_with_as_[a][s]) /
                                   static_cast<double>(rounds_with_s_[s]);
                const double rhs = static_cast<double>(rounds_with_ast_[a][s][t]) /
                                   static_cast<double>(rounds_with_st_[s][t]);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    return worst;
}

// ---------------------------------------------------------------------------
// QuantumNature
// ---------------------------------------------------------------------------

QuantumNature::QuantumNature(std::uint64_t stream_seed, FillRule fill, const ChshTable& table)
    : rng_(stream_seed), fill_(fill), table_(&table) {}

HiddenVariable QuantumNature::respond(const games::ClosedScientistMove& announced) {
    return sample_table_quadruple(rng_, *table_, announced.setting, fill_);
}

// ---------------------------------------------------------------------------
// IndependentLhvNature
// ---------------------------------------------------------------------------

IndependentLhvNature::IndependentLhvNature(std::uint64_t stream_seed) : rng_(stream_seed) {
    law_.fill(1.0 / 16.0);
}

IndependentLhvNature::IndependentLhvNature(std::uint64_t stream_seed,
                                           const std::array<double, 16>& law)
    : rng_(stream_seed), law_(law) {
    double sum = 0.0;
    for (double v : law_) {
        if (v < 0.0 || !std::isfinite(v))
            throw std::invalid_argument("hidden-variable law must be nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("hidden-variable law must sum to 1");
}

HiddenVariable IndependentLhvNature::draw() {
    return HiddenVariable::from_index(rng_.sample(law_));
}

// ---------------------------------------------------------------------------
// MixtureNature
// ---------------------------------------------------------------------------

MixtureNature::MixtureNature(std::uint64_t stream_seed, double p_quantum, FillRule fill,
                             const ChshTable& table)
    : rng_(stream_seed), p_quantum_(p_quantum), fill_(fill), table_(&table) {
    if (p_quantum < 0.0 || p_quantum > 1.0)
        throw std::invalid_argument("mixture weight must lie in [0, 1]");
}

HiddenVariable MixtureNature::respond(const games::ClosedScientistMove& announced) {
    if (rng_.uniform01() < p_quantum_)
        return sample_table_quadruple(rng_, *table_, announced.setting, fill_);
    return HiddenVariable::from_index(static_cast<std::size_t>(rng_.uniform_int(16)));
}

// ---------------------------------------------------------------------------
// ReplayNature
// ---------------------------------------------------------------------------

HiddenVariable ReplayNature::respond(const games::ClosedScientistMove&) {
    if (next_ >= moves_.size()) throw ReplayExhausted("replay script exhausted", next_ + 1);
    return moves_[next_++];
}

// ---------------------------------------------------------------------------
// Locality natures
// ---------------------------------------------------------------------------

Outcome UniformNatureA::respond(const games::LocalityAMove&) {
    return draw_outcome(rng_, 0.5);
}

HiddenVariable LocalityExploitNatureB::respond(const games::LocalityAMove& a_move, Outcome omega_a,
                                               const games::LocalityBMove& b_move) {
    const SettingPair u(a_move.setting, b_move.setting);
    const Outcome omega_b =
        draw_outcome(rng_, table_->conditional_odds(Outcome::plus, omega_a, u));

    std::array<Outcome, 4> quad{};
    quad[static_cast<std::size_t>(u.a() - 1)] = omega_a;
    quad[static_cast<std::size_t>(u.b() - 1)] = omega_b;
    const std::size_t other_a = static_cast<std::size_t>(u.a() == 1 ? 1 : 0);
    const std::size_t other_b = static_cast<std::size_t>(u.b() == 3 ? 3 : 2);
    quad[other_a] = draw_outcome(rng_, 0.5);
    quad[other_b] = draw_outcome(rng_, 0.5);
    return HiddenVariable(quad[0], quad[1], quad[2], quad[3]);
}

}  // namespace bellgame::strategies
