#include "bellgame/stats.hpp"

#include <cmath>

#include "bellgame/errors.hpp"

namespace bellgame::stats {

void ContingencyCounts::increment(const HiddenVariable& tau, const SettingPair& u) {
    const std::size_t ti = tau.index();
    const std::size_t ui = u.index();
    ++table_[ti][ui];
    ++tau_marginal_[ti];
    ++u_marginal_[ui];
    ++n_;
}

bool ContingencyCounts::marginals_consistent() const {
    std::array<std::uint64_t, 16> tau{};
    std::array<std::uint64_t, 4> u{};
    std::uint64_t total = 0;
    for (std::size_t t = 0; t < 16; ++t)
        for (std::size_t s = 0; s < 4; ++s) {
            tau[t] += table_[t][s];
            u[s] += table_[t][s];
            total += table_[t][s];
        }
    return tau == tau_marginal_ && u == u_marginal_ && total == n_;
}

EmpiricalDistributions EmpiricalDistributions::from(const ContingencyCounts& counts) {
    EmpiricalDistributions emp;
    emp.n = counts.n();
    if (emp.n == 0) return emp;
    const double n = static_cast<double>(emp.n);
    for (std::size_t t = 0; t < 16; ++t) {
        emp.q_hat[t] = static_cast<double>(counts.tau_count(t)) / n;
        for (std::size_t u = 0; u < 4; ++u)
            emp.p_hat[t * 4 + u] = static_cast<double>(counts.count(t, u)) / n;
    }
    for (std::size_t u = 0; u < 4; ++u)
        emp.r_hat[u] = static_cast<double>(counts.setting_count(u)) / n;
    return emp;
}

double kl_independence(const ContingencyCounts& counts) {
    const std::uint64_t n = counts.n();
    if (n == 0) return 0.0;
    double d = 0.0;
    for (std::size_t t = 0; t < 16; ++t) {
        for (std::size_t u = 0; u < 4; ++u) {
            const std::uint64_t c = counts.count(t, u);
            if (c == 0) continue;
            // exact integer products (n <= ~1e7, so both fit in 53 bits)
            const double num = static_cast<double>(c * n);
            const double den = static_cast<double>(counts.tau_count(t) * counts.setting_count(u));
            d += (static_cast<double>(c) / static_cast<double>(n)) * std::log(num / den);
        }
    }
    return d;
}

double kl_independence(const EmpiricalDistributions& emp) {
    double d = 0.0;
    for (std::size_t t = 0; t < 16; ++t) {
        for (std::size_t u = 0; u < 4; ++u) {
            const double p = emp.p_hat[t * 4 + u];
            if (p <= 0.0) continue;
            d += p * std::log(p / (emp.q_hat[t] * emp.r_hat[u]));
        }
    }
    return d;
}

double max_factorization_gap(const ContingencyCounts& counts) {
    const std::uint64_t n = counts.n();
    if (n == 0) return 0.0;
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    double gap = 0.0;
    for (std::size_t t = 0; t < 16; ++t)
        for (std::size_t u = 0; u < 4; ++u) {
            const double joint = static_cast<double>(counts.count(t, u) * n);
            const double prod = static_cast<double>(counts.tau_count(t) * counts.setting_count(u));
            gap = std::max(gap, std::abs(joint - prod) / n2);
        }
    return gap;
}

void PairCounts::add_round(const HiddenVariable& lambda, const SettingPair& chosen) {
    for (const SettingPair& u : all_setting_pairs()) {
        const OutcomePair pair{lambda.project(u.a()), lambda.project(u.b())};
        ++population_[u.index()][pair.index()];
        if (u == chosen) ++context_[u.index()][pair.index()];
    }
    ++t_[chosen.index()];
    ++n_;
}

std::uint64_t PairCounts::a_setting_count(int s) const {
    std::uint64_t c = 0;
    for (int t = 3; t <= 4; ++t) c += t_[SettingPair(s, t).index()];
    return c;
}

std::uint64_t PairCounts::a_outcome_count(Outcome a, int s) const {
    std::uint64_t c = 0;
    for (int t = 3; t <= 4; ++t) c += context_outcome_count(a, SettingPair(s, t));
    return c;
}

std::uint64_t PairCounts::context_outcome_count(Outcome a, const SettingPair& u) const {
    std::uint64_t c = 0;
    for (Outcome b : kOutcomes) c += context_[u.index()][OutcomePair{a, b}.index()];
    return c;
}

double empirical_correlation(const PairCounts& pairs, const SettingPair& u, bool use_context) {
    const std::uint64_t denom = use_context ? pairs.setting_count(u) : pairs.n();
    if (denom == 0) {
        if (use_context) throw EmptyContext("no rounds with setting " + u.to_string());
        throw EmptyContext("no rounds recorded");
    }
    double c = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const OutcomePair pair = OutcomePair::from_index(i);
        const std::uint64_t count =
            use_context ? pairs.pair_count_in_context(u, pair) : pairs.pair_count(u, pair);
        c += outcome_value(pair.a) * outcome_value(pair.b) * static_cast<double>(count) /
             static_cast<double>(denom);
    }
    return c;
}

double chsh_statistic(double c13, double c14, double c23, double c24) {
    return c13 - c14 + c23 + c24;
}

double conditional_frequency(const PairCounts& pairs, Outcome a, Outcome b, const SettingPair& u) {
    const std::uint64_t denom = pairs.setting_count(u);
    if (denom == 0) throw EmptyContext("no rounds with setting " + u.to_string());
    return static_cast<double>(pairs.pair_count_in_context(u, OutcomePair{a, b})) /
           static_cast<double>(denom);
}

namespace {
// log Gamma(k + 1) = log k!, in extended precision
long double log_factorial(std::uint64_t k) {
    return std::lgammal(static_cast<long double>(k) + 1.0L);
}
}  // namespace

double w_closed_form(const ContingencyCounts& counts) {
    long double acc = log_factorial(counts.n());
    for (std::size_t t = 0; t < 16; ++t)
        for (std::size_t u = 0; u < 4; ++u) acc += log_factorial(counts.count(t, u));
    for (std::size_t t = 0; t < 16; ++t) acc -= log_factorial(counts.tau_count(t));
    for (std::size_t u = 0; u < 4; ++u) acc -= log_factorial(counts.setting_count(u));
    return static_cast<double>(acc);
}

double w_closed_form_step(const ContingencyCounts& counts, const HiddenVariable& tau,
                          const SettingPair& u) {
    const std::size_t ti = tau.index();
    const std::size_t ui = u.index();
    if (counts.count(ti, ui) == 0)
        throw std::invalid_argument("w_closed_form_step expects post-increment counts");
    const auto delta = [](std::uint64_t post) {
        return log_factorial(post) - log_factorial(post - 1);
    };
    const long double acc = delta(counts.n()) + delta(counts.count(ti, ui)) -
                            delta(counts.tau_count(ti)) - delta(counts.setting_count(ui));
    return static_cast<double>(acc);
}

double stirling_gap(const ContingencyCounts& counts) {
    if (counts.n() == 0) return 0.0;
    return std::abs(w_closed_form(counts) / static_cast<double>(counts.n()) -
                    kl_independence(counts));
}

}  // namespace bellgame::stats
