#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <array>
#include <vector>

#include "bellgame/config.hpp"
#include "bellgame/gtp.hpp"
#include "bellgame/oracle.hpp"
#include "bellgame/runner.hpp"
#include "bellgame/stats.hpp"

namespace py = pybind11;
using namespace bellgame;

namespace {

Outcome outcome_from_int(int v) {
    if (v == 1) return Outcome::plus;
    if (v == -1) return Outcome::minus;
    throw std::invalid_argument("outcome must be +1 or -1");
}

stats::ContingencyCounts counts_from_table(const std::vector<std::vector<std::uint64_t>>& table) {
    if (table.size() != 16) throw std::invalid_argument("counts table must be 16 x 4");
    stats::ContingencyCounts counts;
    for (std::size_t t = 0; t < 16; ++t) {
        if (table[t].size() != 4) throw std::invalid_argument("counts table must be 16 x 4");
        for (std::size_t u = 0; u < 4; ++u)
            for (std::uint64_t k = 0; k < table[t][u]; ++k)
                counts.increment(HiddenVariable::from_index(t), SettingPair::from_index(u));
    }
    return counts;
}

FillRule fill_from_string(const std::string& fill) {
    if (fill == "uniform") return FillRule::uniform;
    if (fill == "copy") return FillRule::copy_partner;
    throw std::invalid_argument("fill rule must be 'uniform' or 'copy'");
}

py::dict rates_dict(const oracle::LimitingRates& rates) {
    py::dict d;
    d["kl"] = rates.kl;
    d["k_rate"] = rates.k_rate;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Sequential betting games for CHSH tests: the odds table, capital "
              "processes, brute-force oracles, and the simulation runner.";

    // --- table constants and operations ---------------------------------
    m.def("mu", [] { return canonical_chsh_table().mu(); });
    m.def("nu", [] { return canonical_chsh_table().nu(); });
    m.def(
        "odds",
        [](int a, int b, int s, int t) {
            return canonical_chsh_table().odds(outcome_from_int(a), outcome_from_int(b),
                                               SettingPair(s, t));
        },
        py::arg("a"), py::arg("b"), py::arg("s"), py::arg("t"),
        "p(a, b | s, t) from the CHSH table");
    m.def(
        "marginal_odds",
        [](int a, int s) { return canonical_chsh_table().marginal_odds(outcome_from_int(a), s); },
        py::arg("a"), py::arg("s"));
    m.def(
        "conditional_odds",
        [](int b, int a, int s, int t) {
            return canonical_chsh_table().conditional_odds(outcome_from_int(b),
                                                           outcome_from_int(a), SettingPair(s, t));
        },
        py::arg("b"), py::arg("a"), py::arg("s"), py::arg("t"));
    m.def(
        "correlation",
        [](int s, int t) { return canonical_chsh_table().correlation(SettingPair(s, t)); },
        py::arg("s"), py::arg("t"));
    m.def("tsirelson", [] { return oracle::table_tsirelson(canonical_chsh_table()); });

    // --- betting ---------------------------------------------------------
    m.def(
        "kt_bet",
        [](const std::vector<std::uint64_t>& counts) {
            gtp::FrequencyCounts fc(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i)
                for (std::uint64_t k = 0; k < counts[i]; ++k) fc.add(i);
            const gtp::BettingDistribution bet = gtp::kt_bet(fc);
            return std::vector<double>(bet.weights().begin(), bet.weights().end());
        },
        py::arg("counts"), "add-half predictive distribution for the given symbol counts");

    // --- oracles ---------------------------------------------------------
    m.def(
        "chsh_value",
        [](const std::array<double, 16>& weights) {
            return oracle::chsh_value(oracle::JointDistribution(weights));
        },
        py::arg("weights"),
        "CHSH combination under one joint distribution on the 16 quadruples");
    m.def("no_joint_witness", [] {
        const oracle::JointWitnessReport r = oracle::no_joint_witness_report(canonical_chsh_table());
        py::dict d;
        d["tsirelson"] = r.tsirelson;
        d["bound_violated"] = r.bound_violated;
        d["feasibility_residual"] = r.feasibility_residual;
        d["infeasible"] = r.infeasible;
        d["witness"] = r.bound_violated && r.infeasible;
        return d;
    });
    m.def(
        "limiting_rates",
        [](const std::string& nature, const std::string& fill, double p_quantum,
           const std::string& lambda) {
            const ChshTable& table = canonical_chsh_table();
            if (nature == "quantum" || nature == "md_lhv")
                return rates_dict(oracle::limiting_rates_quantum(fill_from_string(fill), table));
            if (nature == "independent") {
                std::array<double, 16> law{};
                law.fill(1.0 / 16.0);
                return rates_dict(oracle::limiting_rates_independent(law, table));
            }
            if (nature == "deterministic")
                return rates_dict(oracle::limiting_rates_deterministic(
                    HiddenVariable::from_string(lambda), table));
            if (nature == "mixture")
                return rates_dict(
                    oracle::limiting_rates_mixture(p_quantum, fill_from_string(fill), table));
            throw std::invalid_argument("unknown nature kind: " + nature);
        },
        py::arg("nature"), py::arg("fill") = "uniform", py::arg("p_quantum") = 0.5,
        py::arg("lambda_") = "++++",
        "limiting log W / n and log K / n rates for a stock Nature");

    // --- statistics ------------------------------------------------------
    m.def(
        "w_closed_form",
        [](const std::vector<std::vector<std::uint64_t>>& table) {
            return stats::w_closed_form(counts_from_table(table));
        },
        py::arg("counts"), "log W_n from a 16 x 4 table of (quadruple, setting) counts");
    m.def(
        "kl_independence",
        [](const std::vector<std::vector<std::uint64_t>>& table) {
            return stats::kl_independence(counts_from_table(table));
        },
        py::arg("counts"));

    // --- runner ----------------------------------------------------------
    m.def(
        "simulate",
        [](const std::string& config_text) {
            const cli::RunConfig config = cli::parse_config(config_text);
            const cli::SimulateResult r = cli::simulate(config);
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["csv"] = r.csv;
            d["json"] = r.json;
            d["violation_round"] = r.violation_round;
            d["error"] = r.error;
            return d;
        },
        py::arg("config_text"), "run one configured game from configuration text");
    m.def(
        "verify",
        [](const std::string& csv_text) {
            const cli::VerifyResult r = cli::verify_csv(csv_text);
            py::dict d;
            d["exit_code"] = r.exit_code;
            d["detail"] = r.detail;
            return d;
        },
        py::arg("csv_text"), "recheck a stride-1 closed-game trajectory CSV");
    m.def("oracle_report", [] { return cli::oracle_report_json(); });

    m.attr("CSV_HEADER") = cli::kCsvHeader;
    m.attr("__version__") = "0.1.0";
}
