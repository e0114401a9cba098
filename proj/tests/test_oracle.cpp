#include <cmath>
#include <numbers>

#include <doctest.h>

#include "bellgame/oracle.hpp"

using namespace bellgame;
using namespace bellgame::oracle;

TEST_CASE("joint distribution validation") {
    std::array<double, 16> w{};
    w.fill(1.0 / 16.0);
    CHECK_NOTHROW(JointDistribution(w));
    w[0] = -0.01;
    CHECK_THROWS(JointDistribution(w));
    w[0] = 0.5;
    CHECK_THROWS(JointDistribution(w));  // sum off
}

TEST_CASE("chsh value on the vertices and the simplex") {
    CHECK(chsh_value(JointDistribution::point_mass(HiddenVariable::from_string("++++"))) == 2.0);
    CHECK(chsh_value(JointDistribution::uniform()) == 0.0);

    // every deterministic assignment saturates the bound exactly
    for (std::size_t i = 0; i < 16; ++i) {
        const double s = chsh_value(JointDistribution::point_mass(HiddenVariable::from_index(i)));
        CHECK(std::abs(s) == 2.0);
    }

    // random distributions stay inside by convexity
    Xoshiro256ss rng(2024);
    for (int i = 0; i < 1000; ++i)
        CHECK(std::abs(chsh_value(random_joint(rng))) <= 2.0 + 1e-12);
}

TEST_CASE("chsh value is linear in the distribution") {
    Xoshiro256ss rng(11);
    for (int i = 0; i < 50; ++i) {
        const JointDistribution d1 = random_joint(rng);
        const JointDistribution d2 = random_joint(rng);
        const double alpha = rng.uniform01();
        std::array<double, 16> mix{};
        for (std::size_t k = 0; k < 16; ++k)
            mix[k] = alpha * d1.weight(k) + (1.0 - alpha) * d2.weight(k);
        const double blended = chsh_value(JointDistribution(mix));
        CHECK(std::abs(blended - (alpha * chsh_value(d1) + (1.0 - alpha) * chsh_value(d2))) <=
              1e-12);
    }
}

TEST_CASE("tsirelson value of the table") {
    CHECK(table_tsirelson(canonical_chsh_table()) ==
          doctest::Approx(-2.0 * std::numbers::sqrt2).epsilon(1e-12));
    CHECK(table_tsirelson(ChshTable::swapped_parameters()) ==
          doctest::Approx(2.0 * std::numbers::sqrt2).epsilon(1e-12));
    CHECK(table_tsirelson(ChshTable::uniform_rows()) == doctest::Approx(0.0));
}

TEST_CASE("no-joint-model witness fires on the canonical table only") {
    const JointWitnessReport canonical = no_joint_witness_report(canonical_chsh_table());
    CHECK(canonical.bound_violated);
    CHECK(canonical.infeasible);
    CHECK(canonical.feasibility_residual > 1e-3);
    CHECK(no_joint_witness(canonical_chsh_table()));

    // the uniform table has an explicit joint model (the uniform one)
    const JointWitnessReport uniform = no_joint_witness_report(ChshTable::uniform_rows());
    CHECK_FALSE(uniform.bound_violated);
    CHECK(uniform.feasibility_residual <= 1e-9);
    CHECK_FALSE(no_joint_witness(ChshTable::uniform_rows()));

    // a point-mass table is its own witness
    const ChshTable point = ChshTable::from_point_mass(HiddenVariable::from_string("+-++"));
    const JointWitnessReport report = no_joint_witness_report(point);
    CHECK_FALSE(report.bound_violated);
    CHECK(report.feasibility_residual <= 1e-9);
    CHECK_FALSE(no_joint_witness(point));
}

TEST_CASE("limiting rates: independent uniform") {
    std::array<double, 16> law{};
    law.fill(1.0 / 16.0);
    const LimitingRates rates = limiting_rates_independent(law, canonical_chsh_table());
    CHECK(rates.kl == 0.0);
    CHECK(rates.k_rate == doctest::Approx(std::numbers::ln2 / 2.0).epsilon(1e-12));

    // per-context check: D(uniform pair law || table row) = ln(2)/2 exactly,
    // since (1/4)^2 / (mu nu) = 2
    const ChshTable& t = canonical_chsh_table();
    for (const SettingPair& u : all_setting_pairs()) {
        double d = 0.0;
        for (std::size_t pi = 0; pi < 4; ++pi)
            d += 0.25 * std::log(0.25 / t.odds(OutcomePair::from_index(pi), u));
        CHECK(d == doctest::Approx(std::numbers::ln2 / 2.0).epsilon(1e-12));
    }
}

TEST_CASE("limiting rates: quantum sampler") {
    const LimitingRates uniform_fill =
        limiting_rates_quantum(FillRule::uniform, canonical_chsh_table());
    const LimitingRates copy_fill =
        limiting_rates_quantum(FillRule::copy_partner, canonical_chsh_table());
    CHECK(uniform_fill.kl > 0.1);
    CHECK(uniform_fill.k_rate == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(copy_fill.k_rate == doctest::Approx(0.0).epsilon(1e-15));
    // the fill adds setting-independent randomness, so both rules share
    // the mutual information of (observed pair, setting)
    CHECK(uniform_fill.kl == doctest::Approx(copy_fill.kl).epsilon(1e-12));
}

TEST_CASE("limiting rates: deterministic and mixture") {
    const ChshTable& t = canonical_chsh_table();
    const LimitingRates det =
        limiting_rates_deterministic(HiddenVariable::from_string("++++"), t);
    CHECK(det.kl == 0.0);
    CHECK(det.k_rate ==
          doctest::Approx((3.0 * -std::log(t.mu()) - std::log(t.nu())) / 4.0).epsilon(1e-12));

    const LimitingRates mix = limiting_rates_mixture(0.5, FillRule::uniform, t);
    CHECK(mix.kl > 0.01);
    CHECK(mix.k_rate > 0.01);
    CHECK_THROWS(limiting_rates_mixture(1.5, FillRule::uniform, t));
}
