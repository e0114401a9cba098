#include "bellgame/core.hpp"

#include <cmath>
#include <numbers>

namespace bellgame {

namespace {

void check_rows(const std::array<std::array<double, 4>, 4>& rows, bool strictly_positive) {
    for (const auto& row : rows) {
        double sum = 0.0;
        for (double p : row) {
            if (p < 0.0 || !std::isfinite(p)) throw std::invalid_argument("odds entry out of range");
            if (strictly_positive && p <= 0.0) throw std::invalid_argument("odds entry must be positive");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("odds row must sum to 1");
    }
}

std::array<std::array<double, 4>, 4> two_parameter_rows(double equal_pair, double unequal_pair,
                                                        double equal_pair_14, double unequal_pair_14) {
    // pair index order: ++, +-, -+, --
    std::array<std::array<double, 4>, 4> rows{};
    for (const SettingPair& u : all_setting_pairs()) {
        const bool flipped = (u.a() == 1 && u.b() == 4);
        const double eq = flipped ? equal_pair_14 : equal_pair;
        const double ne = flipped ? unequal_pair_14 : unequal_pair;
        rows[u.index()] = {eq, ne, ne, eq};
    }
    return rows;
}

}  // namespace

ChshTable::ChshTable() {
    mu_ = (2.0 - std::numbers::sqrt2) / 8.0;
    nu_ = (2.0 + std::numbers::sqrt2) / 8.0;
    entries_ = two_parameter_rows(mu_, nu_, nu_, mu_);

    if (std::abs(2.0 * mu_ + 2.0 * nu_ - 1.0) > 1e-15)
        throw std::logic_error("CHSH table: 2mu + 2nu != 1");
    check_rows(entries_, /*strictly_positive=*/true);
    for (const auto& row : entries_) {
        double sum = 0.0;
        for (double p : row) sum += p;
        if (std::abs(sum - 1.0) > 1e-15) throw std::logic_error("CHSH table row does not sum to 1");
    }
}

ChshTable ChshTable::swapped_parameters() {
    const ChshTable base;
    return ChshTable(base.nu_, base.mu_, two_parameter_rows(base.nu_, base.mu_, base.mu_, base.nu_));
}

ChshTable ChshTable::uniform_rows() {
    return ChshTable(0.25, 0.25, two_parameter_rows(0.25, 0.25, 0.25, 0.25));
}

ChshTable ChshTable::from_point_mass(const HiddenVariable& lambda) {
    std::array<std::array<double, 4>, 4> rows{};
    for (const SettingPair& u : all_setting_pairs()) {
        const OutcomePair pair{lambda.project(u.a()), lambda.project(u.b())};
        rows[u.index()][pair.index()] = 1.0;
    }
    return from_rows(rows);
}

ChshTable ChshTable::from_rows(const std::array<std::array<double, 4>, 4>& rows_by_setting) {
    check_rows(rows_by_setting, /*strictly_positive=*/false);
    return ChshTable(0.0, 0.0, rows_by_setting);
}

double ChshTable::marginal_odds(Outcome a, int s) const {
    if (s != 1 && s != 2) throw InvalidSetting("marginal_odds: s must be 1 or 2");
    double by_t[2];
    for (int t : {3, 4}) {
        const SettingPair u(s, t);
        by_t[t - 3] = odds(a, Outcome::plus, u) + odds(a, Outcome::minus, u);
    }
    // Identical addends in identical order, so the two sums must agree
    // bit for bit on any consistent table.
    if (by_t[0] != by_t[1])
        throw std::domain_error("marginal_odds: A-side marginal depends on t");
    return by_t[0];
}

double ChshTable::conditional_odds(Outcome b, Outcome a, const SettingPair& u) const {
    return odds(a, b, u) / marginal_odds(a, u.a());
}

double ChshTable::correlation(const SettingPair& u) const {
    double c = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        const OutcomePair pair = OutcomePair::from_index(i);
        c += outcome_value(pair.a) * outcome_value(pair.b) * entries_[u.index()][i];
    }
    return c;
}

HiddenVariable HiddenVariable::from_string(const std::string& s) {
    if (s.size() != 4) throw std::invalid_argument("hidden variable string must have 4 characters");
    std::array<Outcome, 4> quad{};
    for (std::size_t k = 0; k < 4; ++k) {
        if (s[k] == '+')
            quad[k] = Outcome::plus;
        else if (s[k] == '-')
            quad[k] = Outcome::minus;
        else
            throw std::invalid_argument("hidden variable string must use '+' and '-'");
    }
    return HiddenVariable(quad[0], quad[1], quad[2], quad[3]);
}

const ChshTable& canonical_chsh_table() {
    static const ChshTable table;
    return table;
}

}  // namespace bellgame
