#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>

#include "bellgame/errors.hpp"

namespace bellgame {

// Domain alphabets for the CHSH betting games.
//
// Measurement outcomes live in {+1, -1}. Scientist A owns settings {1, 2},
// Scientist B owns settings {3, 4}, and a joint setting is a pair from
// {1,2} x {3,4}. A hidden variable preassigns an outcome to every one of the
// four settings at once, so the canonical hidden-variable space is the set
// of quadruples {+1,-1}^4 with coordinate projections X_1..X_4.

enum class Outcome : std::int8_t { plus = +1, minus = -1 };

constexpr int outcome_value(Outcome w) { return static_cast<int>(w); }
constexpr Outcome negated(Outcome w) { return w == Outcome::plus ? Outcome::minus : Outcome::plus; }

// Canonical index: +1 -> 0, -1 -> 1.
constexpr std::size_t outcome_index(Outcome w) { return w == Outcome::plus ? 0 : 1; }
constexpr Outcome outcome_from_index(std::size_t i) {
    return i == 0 ? Outcome::plus : Outcome::minus;
}
constexpr char outcome_char(Outcome w) { return w == Outcome::plus ? '+' : '-'; }

inline constexpr std::array<Outcome, 2> kOutcomes = {Outcome::plus, Outcome::minus};

// Ordered outcome pair (A's wing first). Index order: ++, +-, -+, --.
struct OutcomePair {
    Outcome a = Outcome::plus;
    Outcome b = Outcome::plus;

    constexpr std::size_t index() const { return outcome_index(a) * 2 + outcome_index(b); }
    static constexpr OutcomePair from_index(std::size_t i) {
        return {outcome_from_index(i / 2), outcome_from_index(i % 2)};
    }
    friend constexpr bool operator==(OutcomePair, OutcomePair) = default;
};

// Joint measurement setting (s, t) with s in {1,2}, t in {3,4}.
// Index order: (1,3), (1,4), (2,3), (2,4).
class SettingPair {
public:
    SettingPair(int a, int b) : a_(a), b_(b) {
        if (a != 1 && a != 2) throw InvalidSetting("A-side setting must be 1 or 2");
        if (b != 3 && b != 4) throw InvalidSetting("B-side setting must be 3 or 4");
    }

    int a() const { return a_; }
    int b() const { return b_; }
    std::size_t index() const { return static_cast<std::size_t>((a_ - 1) * 2 + (b_ - 3)); }

    static SettingPair from_index(std::size_t i) {
        if (i >= 4) throw InvalidSetting("setting pair index out of range");
        return SettingPair(static_cast<int>(i / 2) + 1, static_cast<int>(i % 2) + 3);
    }

    std::string to_string() const {
        return "(" + std::to_string(a_) + "," + std::to_string(b_) + ")";
    }

    friend bool operator==(const SettingPair&, const SettingPair&) = default;

private:
    int a_;
    int b_;
};

inline std::array<SettingPair, 4> all_setting_pairs() {
    return {SettingPair(1, 3), SettingPair(1, 4), SettingPair(2, 3), SettingPair(2, 4)};
}

// How a Nature that only commits to the observed pair of coordinates fills
// the two it was not asked about.
enum class FillRule { uniform, copy_partner };

// A point of the canonical hidden-variable space: the quadruple
// (X_1, X_2, X_3, X_4) of preassigned outcomes. There are 16 distinct
// values; from_index/index is a bijection with 0..15, coordinate 1 being
// the most significant bit (+1 -> 0, -1 -> 1).
class HiddenVariable {
public:
    HiddenVariable() : quad_{Outcome::plus, Outcome::plus, Outcome::plus, Outcome::plus} {}
    HiddenVariable(Outcome w1, Outcome w2, Outcome w3, Outcome w4) : quad_{w1, w2, w3, w4} {}

    // Coordinate projection X_s for s in 1..4.
    Outcome project(int s) const {
        if (s < 1 || s > 4) throw InvalidSetting("projection index must be 1..4");
        return quad_[static_cast<std::size_t>(s - 1)];
    }

    const std::array<Outcome, 4>& quad() const { return quad_; }

    std::size_t index() const {
        std::size_t i = 0;
        for (Outcome w : quad_) i = i * 2 + outcome_index(w);
        return i;
    }

    static HiddenVariable from_index(std::size_t i) {
        if (i >= 16) throw InvalidSetting("hidden-variable index out of range");
        return HiddenVariable(outcome_from_index((i >> 3) & 1), outcome_from_index((i >> 2) & 1),
                              outcome_from_index((i >> 1) & 1), outcome_from_index(i & 1));
    }

    // Four-character form, e.g. "+-++".
    std::string to_string() const {
        std::string s(4, '+');
        for (int k = 0; k < 4; ++k) s[static_cast<std::size_t>(k)] = outcome_char(quad_[static_cast<std::size_t>(k)]);
        return s;
    }

    static HiddenVariable from_string(const std::string& s);

    friend bool operator==(const HiddenVariable&, const HiddenVariable&) = default;

private:
    std::array<Outcome, 4> quad_;
};

// The CHSH odds table: for each joint setting (s,t), a distribution over
// outcome pairs. The canonical table has parameters mu = (2 - sqrt 2)/8 and
// nu = (2 + sqrt 2)/8; equal-outcome pairs get mu except under setting
// (1,4), where they get nu, and unequal pairs the other way around. Its four
// correlations are -1/sqrt2, +1/sqrt2, -1/sqrt2, -1/sqrt2, so the CHSH
// combination C(1,3) - C(1,4) + C(2,3) + C(2,4) reaches -2*sqrt(2).
//
// Hypothetical tables (swapped parameters, uniform rows, rows induced by a
// fixed quadruple) can be built through the named constructors; they are
// used by the brute-force certification code, not by the games.
class ChshTable {
public:
    // The canonical table. Construction checks 2*mu + 2*nu = 1, row
    // normalization, strict positivity and the layout described above,
    // all to 1e-15 absolute.
    ChshTable();

    static ChshTable canonical() { return ChshTable(); }
    // mu and nu exchanged in every column.
    static ChshTable swapped_parameters();
    // every entry 1/4 (satisfies the CHSH bound; has a trivial joint model).
    static ChshTable uniform_rows();
    // the degenerate table of a deterministic hidden variable: entry 1 at
    // (X_s(lambda), X_t(lambda)) in every column.
    static ChshTable from_point_mass(const HiddenVariable& lambda);
    // arbitrary rows; each must be a distribution over the four pairs
    // (nonnegative, sum 1 within 1e-12).
    static ChshTable from_rows(const std::array<std::array<double, 4>, 4>& rows_by_setting);

    double mu() const { return mu_; }
    double nu() const { return nu_; }

    // p(a, b | u)
    double odds(Outcome a, Outcome b, const SettingPair& u) const {
        return entries_[u.index()][OutcomePair{a, b}.index()];
    }
    double odds(const OutcomePair& pair, const SettingPair& u) const {
        return entries_[u.index()][pair.index()];
    }

    // p(a | s) = sum_b p(a, b | s, t), independent of t. Computed for both
    // t = 3 and t = 4 and required to agree exactly; 1/2 on the canonical
    // table.
    double marginal_odds(Outcome a, int s) const;

    // p(b | a, s, t) = p(a, b | s, t) / p(a | s); equals 2 p(a, b | s, t)
    // on the canonical table.
    double conditional_odds(Outcome b, Outcome a, const SettingPair& u) const;

    // C(s, t) = sum_{a,b} a*b * p(a, b | s, t)
    double correlation(const SettingPair& u) const;

    const std::array<double, 4>& row(const SettingPair& u) const { return entries_[u.index()]; }

private:
    ChshTable(double mu, double nu, const std::array<std::array<double, 4>, 4>& entries)
        : mu_(mu), nu_(nu), entries_(entries) {}

    double mu_ = 0.0;  // NaN-free; 0 for tables without the two-parameter form
    double nu_ = 0.0;
    std::array<std::array<double, 4>, 4> entries_{};  // [setting index][pair index]
};

const ChshTable& canonical_chsh_table();

}  // namespace bellgame
