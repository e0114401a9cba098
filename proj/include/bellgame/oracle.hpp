#pragma once

#include <array>
#include <cstdint>

#include "bellgame/core.hpp"
#include "bellgame/prng.hpp"

namespace bellgame::oracle {

// Ground-truth computations, independent of the game engines: the CHSH
// bound checked by brute force over joint distributions on the 16-point
// hidden-variable space, the Tsirelson value of the odds table, a
// two-certificate proof that no joint distribution reproduces the table,
// and exact limiting growth rates for the stock Nature behaviors.

// A probability distribution over the 16 hidden-variable quadruples.
// Degenerate (point-mass) distributions are allowed.
class JointDistribution {
public:
    explicit JointDistribution(const std::array<double, 16>& weights);

    static JointDistribution uniform();
    static JointDistribution point_mass(const HiddenVariable& tau);

    double weight(std::size_t tau_index) const { return weights_[tau_index]; }
    const std::array<double, 16>& weights() const { return weights_; }

private:
    std::array<double, 16> weights_{};
};

// Dirichlet(1,...,1) draw (uniform on the simplex), for randomized checks.
JointDistribution random_joint(Xoshiro256ss& rng);

// Pair correlation E[X_s X_t] under d, for (s, t) in 1..4.
double pair_correlation(const JointDistribution& d, int s, int t);

// S = C(1,3) - C(1,4) + C(2,3) + C(2,4) under a single joint distribution.
// Every distribution on the quadruples satisfies |S| <= 2.
double chsh_value(const JointDistribution& d);

// The same combination computed from the odds table's rows; the canonical
// table gives -2*sqrt(2).
double table_tsirelson(const ChshTable& table);

// Certifies that no joint distribution reproduces all four of the table's
// rows as pairwise marginals, by two independent routes:
//   - bound_violated: |table_tsirelson| > 2 + 1e-9, which is impossible
//     for any pairwise marginal family of a single joint distribution;
//   - infeasible: nonnegative least squares over the 16-dimensional
//     simplex cannot meet the 16 marginal constraints (residual > 1e-6;
//     a residual <= 1e-9 counts as feasible).
struct JointWitnessReport {
    double tsirelson = 0.0;
    bool bound_violated = false;
    double feasibility_residual = 0.0;
    bool infeasible = false;
};

JointWitnessReport no_joint_witness_report(const ChshTable& table);

// true iff both certificates agree that no joint model exists.
bool no_joint_witness(const ChshTable& table);

// Limiting per-round rates for a Nature whose conditional law of the
// quadruple given the joint setting is time-homogeneous:
//   kl      - lim D(P-hat || Q-hat * R-hat), the growth rate of log W;
//   k_rate  - lim log K / n for the per-setting add-half bettor, i.e. the
//             setting-averaged KL divergence of the realized outcome-pair
//             law from the table row.
struct LimitingRates {
    double kl = 0.0;
    double k_rate = 0.0;
};

// conditional_law[u][tau]: law of the announced quadruple given setting u.
// setting_law: limiting frequencies of the four joint settings.
LimitingRates limiting_rates(const std::array<std::array<double, 16>, 4>& conditional_law,
                             const std::array<double, 4>& setting_law, const ChshTable& table);

inline constexpr std::array<double, 4> kUniformSettingLaw = {0.25, 0.25, 0.25, 0.25};

// Nature that samples the observed pair from the table row and fills the
// two unobserved coordinates by `fill`. Measurement-dependent by
// construction, so kl > 0.
LimitingRates limiting_rates_quantum(FillRule fill, const ChshTable& table,
                                     const std::array<double, 4>& setting_law = kUniformSettingLaw);

// Nature that draws the quadruple i.i.d. from `law`, independent of the
// setting: kl = 0 exactly. For the uniform law the bettor's rate is
// ln(2)/2 per round.
LimitingRates limiting_rates_independent(const std::array<double, 16>& law, const ChshTable& table,
                                         const std::array<double, 4>& setting_law = kUniformSettingLaw);

// A fixed quadruple every round: kl = 0 (degenerate marginal factorizes).
LimitingRates limiting_rates_deterministic(const HiddenVariable& lambda, const ChshTable& table,
                                           const std::array<double, 4>& setting_law = kUniformSettingLaw);

// Coin mixture of the quantum sampler and the uniform independent one.
LimitingRates limiting_rates_mixture(double p_quantum, FillRule fill, const ChshTable& table,
                                     const std::array<double, 4>& setting_law = kUniformSettingLaw);

}  // namespace bellgame::oracle
