#include "bellgame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace bellgame::oracle {

JointDistribution::JointDistribution(const std::array<double, 16>& weights) : weights_(weights) {
    double sum = 0.0;
    for (double w : weights_) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("joint distribution weights must be nonnegative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("joint distribution weights must sum to 1");
}

JointDistribution JointDistribution::uniform() {
    std::array<double, 16> w{};
    w.fill(1.0 / 16.0);
    return JointDistribution(w);
}

JointDistribution JointDistribution::point_mass(const HiddenVariable& tau) {
    std::array<double, 16> w{};
    w[tau.index()] = 1.0;
    return JointDistribution(w);
}

JointDistribution random_joint(Xoshiro256ss& rng) {
    // normalized unit exponentials = Dirichlet(1,...,1)
    std::array<double, 16> w{};
    double sum = 0.0;
    for (double& x : w) {
        x = -std::log(1.0 - rng.uniform01());
        sum += x;
    }
    for (double& x : w) x /= sum;
    // renormalize exactly enough for the constructor's 1e-12 gate
    double s2 = 0.0;
    for (double x : w) s2 += x;
    for (double& x : w) x /= s2;
    return JointDistribution(w);
}

double pair_correlation(const JointDistribution& d, int s, int t) {
    double c = 0.0;
    for (std::size_t i = 0; i < 16; ++i) {
        const HiddenVariable tau = HiddenVariable::from_index(i);
        c += outcome_value(tau.project(s)) * outcome_value(tau.project(t)) * d.weight(i);
    }
    return c;
}

double chsh_value(const JointDistribution& d) {
    return pair_correlation(d, 1, 3) - pair_correlation(d, 1, 4) + pair_correlation(d, 2, 3) +
           pair_correlation(d, 2, 4);
}

double table_tsirelson(const ChshTable& table) {
    return table.correlation(SettingPair(1, 3)) - table.correlation(SettingPair(1, 4)) +
           table.correlation(SettingPair(2, 3)) + table.correlation(SettingPair(2, 4));
}

namespace {

// Dense least squares by normal equations with partial pivoting; systems
// here are at most 16 x 16 and well conditioned on the passive sets the
// NNLS iteration produces.
std::vector<double> solve_normal_equations(const std::vector<std::vector<double>>& a,
                                           const std::vector<double>& b,
                                           const std::vector<std::size_t>& cols) {
    const std::size_t m = a.size();
    const std::size_t k = cols.size();
    std::vector<std::vector<double>> g(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t r = 0; r < m; ++r) dot += a[r][cols[i]] * a[r][cols[j]];
            g[i][j] = dot;
        }
        double rhs = 0.0;
        for (std::size_t r = 0; r < m; ++r) rhs += a[r][cols[i]] * b[r];
        g[i][k] = rhs;
    }
    for (std::size_t p = 0; p < k; ++p) {
        std::size_t pivot = p;
        for (std::size_t r = p + 1; r < k; ++r)
            if (std::abs(g[r][p]) > std::abs(g[pivot][p])) pivot = r;
        std::swap(g[p], g[pivot]);
        const double diag = g[p][p];
        if (std::abs(diag) < 1e-14) {
            // rank-deficient passive set; give up on this column choice
            std::vector<double> z(k, 0.0);
            return z;
        }
        for (std::size_t r = 0; r < k; ++r) {
            if (r == p) continue;
            const double f = g[r][p] / diag;
            for (std::size_t c = p; c <= k; ++c) g[r][c] -= f * g[p][c];
        }
    }
    std::vector<double> z(k);
    for (std::size_t i = 0; i < k; ++i) z[i] = g[i][k] / g[i][i];
    return z;
}

// Lawson-Hanson nonnegative least squares: min ||A x - b|| s.t. x >= 0.
// Returns the residual 2-norm.
double nnls_residual(const std::vector<std::vector<double>>& a, const std::vector<double>& b) {
    const std::size_t m = a.size();
    const std::size_t nvar = a[0].size();
    std::vector<double> x(nvar, 0.0);
    std::vector<bool> passive(nvar, false);
    const double tol = 1e-12;

    for (int outer = 0; outer < 200; ++outer) {
        // gradient w = A^T (b - A x)
        std::vector<double> resid(m);
        for (std::size_t r = 0; r < m; ++r) {
            double dot = 0.0;
            for (std::size_t c = 0; c < nvar; ++c) dot += a[r][c] * x[c];
            resid[r] = b[r] - dot;
        }
        double best = tol;
        std::size_t best_j = nvar;
        for (std::size_t j = 0; j < nvar; ++j) {
            if (passive[j]) continue;
            double w = 0.0;
            for (std::size_t r = 0; r < m; ++r) w += a[r][j] * resid[r];
            if (w > best) {
                best = w;
                best_j = j;
            }
        }
        if (best_j == nvar) break;
        passive[best_j] = true;

        for (int inner = 0; inner < 200; ++inner) {
            std::vector<std::size_t> cols;
            for (std::size_t j = 0; j < nvar; ++j)
                if (passive[j]) cols.push_back(j);
            const std::vector<double> z = solve_normal_equations(a, b, cols);
            bool all_positive = true;
            for (double v : z)
                if (v <= tol) all_positive = false;
            if (all_positive) {
                for (std::size_t i = 0; i < cols.size(); ++i) x[cols[i]] = z[i];
                break;
            }
            double alpha = 1.0;
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (z[i] <= tol) {
                    const double xi = x[cols[i]];
                    if (xi - z[i] > 0) alpha = std::min(alpha, xi / (xi - z[i]));
                }
            }
            for (std::size_t i = 0; i < cols.size(); ++i) {
                x[cols[i]] += alpha * (z[i] - x[cols[i]]);
                if (x[cols[i]] <= tol) {
                    x[cols[i]] = 0.0;
                    passive[cols[i]] = false;
                }
            }
        }
    }

    double rss = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        double dot = 0.0;
        for (std::size_t c = 0; c < nvar; ++c) dot += a[r][c] * x[c];
        rss += (b[r] - dot) * (b[r] - dot);
    }
    return std::sqrt(rss);
}

}  // namespace

JointWitnessReport no_joint_witness_report(const ChshTable& table) {
    JointWitnessReport report;
    report.tsirelson = table_tsirelson(table);
    report.bound_violated = std::abs(report.tsirelson) > 2.0 + 1e-9;

    // Feasibility: find x >= 0 on the 16-simplex whose pairwise marginals
    // reproduce every table row. 16 marginal constraints plus the
    // normalization row.
    std::vector<std::vector<double>> a(17, std::vector<double>(16, 0.0));
    std::vector<double> b(17, 0.0);
    std::size_t row = 0;
    for (const SettingPair& u : all_setting_pairs()) {
        for (std::size_t pi = 0; pi < 4; ++pi) {
            const OutcomePair pair = OutcomePair::from_index(pi);
            for (std::size_t ti = 0; ti < 16; ++ti) {
                const HiddenVariable tau = HiddenVariable::from_index(ti);
                if (tau.project(u.a()) == pair.a && tau.project(u.b()) == pair.b)
                    a[row][ti] = 1.0;
            }
            b[row] = table.odds(pair, u);
            ++row;
        }
    }
    for (std::size_t ti = 0; ti < 16; ++ti) a[16][ti] = 1.0;
    b[16] = 1.0;

    report.feasibility_residual = nnls_residual(a, b);
    report.infeasible = report.feasibility_residual > 1e-6;
    return report;
}

bool no_joint_witness(const ChshTable& table) {
    const JointWitnessReport report = no_joint_witness_report(table);
    return report.bound_violated && report.infeasible;
}

LimitingRates limiting_rates(const std::array<std::array<double, 16>, 4>& conditional_law,
                             const std::array<double, 4>& setting_law, const ChshTable& table) {
    for (const auto& law : conditional_law) {
        double sum = 0.0;
        for (double v : law) {
            if (v < 0.0) throw std::invalid_argument("conditional law must be nonnegative");
            sum += v;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("conditional law must sum to 1");
    }

    LimitingRates rates;

    // kl = mutual information of (quadruple, setting) under
    // P(tau, u) = R(u) L_u(tau)
    std::array<double, 16> q{};
    for (std::size_t u = 0; u < 4; ++u)
        for (std::size_t t = 0; t < 16; ++t) q[t] += setting_law[u] * conditional_law[u][t];
    double kl = 0.0;
    for (std::size_t u = 0; u < 4; ++u) {
        for (std::size_t t = 0; t < 16; ++t) {
            const double p = setting_law[u] * conditional_law[u][t];
            if (p <= 0.0) continue;
            kl += p * std::log(conditional_law[u][t] / q[t]);
        }
    }
    rates.kl = kl;

    // k_rate = setting-averaged D(realized pair law || table row)
    double k_rate = 0.0;
    for (const SettingPair& u : all_setting_pairs()) {
        std::array<double, 4> pair_law{};
        for (std::size_t t = 0; t < 16; ++t) {
            const HiddenVariable tau = HiddenVariable::from_index(t);
            const OutcomePair pair{tau.project(u.a()), tau.project(u.b())};
            pair_law[pair.index()] += conditional_law[u.index()][t];
        }
        double d = 0.0;
        for (std::size_t pi = 0; pi < 4; ++pi) {
            if (pair_law[pi] <= 0.0) continue;
            const double odds = table.odds(OutcomePair::from_index(pi), u);
            if (odds <= 0.0) {
                d = std::numeric_limits<double>::infinity();
                break;
            }
            d += pair_law[pi] * std::log(pair_law[pi] / odds);
        }
        k_rate += setting_law[u.index()] * d;
    }
    rates.k_rate = k_rate;
    return rates;
}

namespace {

std::array<double, 16> quantum_conditional_law(const SettingPair& u, FillRule fill,
                                               const ChshTable& table) {
    std::array<double, 16> law{};
    const int other_a = (u.a() == 1) ? 2 : 1;
    const int other_b = (u.b() == 3) ? 4 : 3;
    for (std::size_t pi = 0; pi < 4; ++pi) {
        const OutcomePair pair = OutcomePair::from_index(pi);
        const double p = table.odds(pair, u);
        std::array<Outcome, 4> quad{};
        quad[static_cast<std::size_t>(u.a() - 1)] = pair.a;
        quad[static_cast<std::size_t>(u.b() - 1)] = pair.b;
        if (fill == FillRule::copy_partner) {
            quad[static_cast<std::size_t>(other_a - 1)] = pair.a;
            quad[static_cast<std::size_t>(other_b - 1)] = pair.b;
            law[HiddenVariable(quad[0], quad[1], quad[2], quad[3]).index()] += p;
        } else {
            for (Outcome fa : kOutcomes) {
                for (Outcome fb : kOutcomes) {
                    quad[static_cast<std::size_t>(other_a - 1)] = fa;
                    quad[static_cast<std::size_t>(other_b - 1)] = fb;
                    law[HiddenVariable(quad[0], quad[1], quad[2], quad[3]).index()] += p / 4.0;
                }
            }
        }
    }
    return law;
}

}  // namespace

LimitingRates limiting_rates_quantum(FillRule fill, const ChshTable& table,
                                     const std::array<double, 4>& setting_law) {
    std::array<std::array<double, 16>, 4> law{};
    for (const SettingPair& u : all_setting_pairs())
        law[u.index()] = quantum_conditional_law(u, fill, table);
    return limiting_rates(law, setting_law, table);
}

LimitingRates limiting_rates_independent(const std::array<double, 16>& lambda_law,
                                         const ChshTable& table,
                                         const std::array<double, 4>& setting_law) {
    std::array<std::array<double, 16>, 4> law{};
    for (std::size_t u = 0; u < 4; ++u) law[u] = lambda_law;
    return limiting_rates(law, setting_law, table);
}

LimitingRates limiting_rates_deterministic(const HiddenVariable& lambda, const ChshTable& table,
                                           const std::array<double, 4>& setting_law) {
    std::array<double, 16> law{};
    law[lambda.index()] = 1.0;
    return limiting_rates_independent(law, table, setting_law);
}

LimitingRates limiting_rates_mixture(double p_quantum, FillRule fill, const ChshTable& table,
                                     const std::array<double, 4>& setting_law) {
    if (p_quantum < 0.0 || p_quantum > 1.0)
        throw std::invalid_argument("mixture weight must lie in [0, 1]");
    std::array<std::array<double, 16>, 4> law{};
    for (const SettingPair& u : all_setting_pairs()) {
        const std::array<double, 16> q = quantum_conditional_law(u, fill, table);
        for (std::size_t t = 0; t < 16; ++t)
            law[u.index()][t] = p_quantum * q[t] + (1.0 - p_quantum) / 16.0;
    }
    return limiting_rates(law, setting_law, table);
}

}  // namespace bellgame::oracle
