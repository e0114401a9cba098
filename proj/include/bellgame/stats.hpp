#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "bellgame/core.hpp"

namespace bellgame::stats {

// Empirical quantities of the loopholes-closed game: the 16 x 4 contingency
// table of (hidden variable, joint setting) counts with its marginals, the
// empirical distributions P-hat / Q-hat / R-hat, pairwise outcome counts,
// empirical correlations, the CHSH statistic, and the closed form of the
// independence-testing capital process W.

class ContingencyCounts {
public:
    void increment(const HiddenVariable& tau, const SettingPair& u);

    std::uint64_t count(std::size_t tau_index, std::size_t u_index) const {
        return table_[tau_index][u_index];
    }
    std::uint64_t tau_count(std::size_t tau_index) const { return tau_marginal_[tau_index]; }
    std::uint64_t setting_count(std::size_t u_index) const { return u_marginal_[u_index]; }
    std::uint64_t n() const { return n_; }

    // Recomputes both marginals from the table; true iff they match the
    // incrementally maintained ones exactly.
    bool marginals_consistent() const;

private:
    std::array<std::array<std::uint64_t, 4>, 16> table_{};
    std::array<std::uint64_t, 16> tau_marginal_{};
    std::array<std::uint64_t, 4> u_marginal_{};
    std::uint64_t n_ = 0;
};

// counts / n, all three distributions at once.
struct EmpiricalDistributions {
    std::array<double, 64> p_hat{};  // [tau_index * 4 + u_index]
    std::array<double, 16> q_hat{};
    std::array<double, 4> r_hat{};
    std::uint64_t n = 0;

    static EmpiricalDistributions from(const ContingencyCounts& counts);
};

// D(P-hat || Q-hat * R-hat) in nats, with the 0 log 0 = 0 convention.
// The counts overload works on exact integer ratios, so it returns exactly
// 0 whenever the table factorizes cellwise.
double kl_independence(const ContingencyCounts& counts);
double kl_independence(const EmpiricalDistributions& emp);

// max over cells of |P-hat - Q-hat * R-hat|.
double max_factorization_gap(const ContingencyCounts& counts);

// Pairwise outcome counts S(w^s, w^t) for the four joint settings, both the
// population version (every round, read off the hidden variable) and the
// version restricted to rounds where that setting was actually chosen.
class PairCounts {
public:
    void add_round(const HiddenVariable& lambda, const SettingPair& chosen);

    std::uint64_t n() const { return n_; }
    std::uint64_t setting_count(const SettingPair& u) const { return t_[u.index()]; }
    // S_n(w^s, w^t) with (s,t) = u, counted over all rounds.
    std::uint64_t pair_count(const SettingPair& u, const OutcomePair& pair) const {
        return population_[u.index()][pair.index()];
    }
    // S_n(w^s, w^t ; s, t): restricted to rounds with setting u.
    std::uint64_t pair_count_in_context(const SettingPair& u, const OutcomePair& pair) const {
        return context_[u.index()][pair.index()];
    }

    // Counts used by the A-side balancing diagnostics: rounds with s_i = s,
    // rounds with (s_i, t_i) = (s, t), and the same two restricted to
    // rounds whose A-wing outcome was a.
    std::uint64_t a_setting_count(int s) const;
    std::uint64_t a_outcome_count(Outcome a, int s) const;
    std::uint64_t context_outcome_count(Outcome a, const SettingPair& u) const;

private:
    std::array<std::array<std::uint64_t, 4>, 4> population_{};  // [u][pair]
    std::array<std::array<std::uint64_t, 4>, 4> context_{};
    std::array<std::uint64_t, 4> t_{};
    std::uint64_t n_ = 0;
};

// C_n(s,t): with use_context, sum_{pairs} w^s w^t S(...; s,t) / T(s,t)
// (throws EmptyContext when T(s,t) = 0); otherwise the population analogue
// with denominator n.
double empirical_correlation(const PairCounts& pairs, const SettingPair& u, bool use_context);

double chsh_statistic(double c13, double c14, double c23, double c24);

// Ratio of joint to setting counts: the empirical version of p(a, b | s, t).
// Throws EmptyContext when the setting has not occurred.
double conditional_frequency(const PairCounts& pairs, Outcome a, Outcome b, const SettingPair& u);

// log W_n from the multinomial closed form
//   W_n = n! * prod T(tau;u)! / (prod T(tau)! * prod T(u)!),
// evaluated through log-gamma (accumulated in extended precision; counts
// can reach 1e7).
double w_closed_form(const ContingencyCounts& counts);

// The closed-form increment caused by one more observation at (tau, u),
// with `counts` already incremented: equals
// w_closed_form(counts) - w_closed_form(counts before the increment)
// with the 81 unchanged log-gamma terms cancelled symbolically.
double w_closed_form_step(const ContingencyCounts& counts, const HiddenVariable& tau,
                          const SettingPair& u);

// |log W_n / n - D(P-hat || Q-hat * R-hat)|: the Stirling remainder, which
// the asymptotics bound by O(log n / n).
double stirling_gap(const ContingencyCounts& counts);

}  // namespace bellgame::stats
